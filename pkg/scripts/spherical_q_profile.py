"""Q along the meridian of spherical catenoids, for locating the maximum of the pinching functional.

Output columns: a, s, r, Q. One block per value of a; the neck is s = 0.
"""

import argparse
import sys

import numpy as np

from fbgap import io as tables
from fbgap.catenoid import make_catenoid
from fbgap.pinch import pinch_Q


def meridian_q(a: float, n: int) -> list[list[float]]:
    cat = make_catenoid("spherical", a)
    rows = []
    for s in np.linspace(0.0, cat.s0, n):
        smp = cat.sample(float(s), 0.0)
        rows.append([a, float(s), smp.r, pinch_Q(smp)])
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--a", type=float, nargs="+", default=[-0.45, -0.4, -0.3, -0.25, -0.2, -0.1, -0.05])
    p.add_argument("--points", type=int, default=201)
    args = p.parse_args(argv)
    rows = [row for a in args.a for row in meridian_q(a, args.points)]
    sys.stdout.write(tables.write_csv(("a", "s", "r", "Q"), rows))
    for a in args.a:
        block = [r for r in rows if r[0] == a]
        best = max(block, key=lambda r: r[3])
        print(f"a = {a:+.3f}: max Q = {best[3]:.15f} at s = {best[1]:.3g}", file=sys.stderr)


if __name__ == "__main__":
    main()
