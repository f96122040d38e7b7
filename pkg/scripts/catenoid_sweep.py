"""Certify the parametric catenoids over a range of a and report the map a -> (s0, R, sup Q)."""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from fbgap import io as tables
from fbgap.catenoid import make_catenoid
from fbgap.pinch import certify_catenoid


@dataclass(frozen=True)
class SweepConfig:
    model: str = "hyperbolic"
    a_min: float = 0.55
    a_max: float = 4.0
    steps: int = 24
    n_s: int = 201
    n_theta: int = 8


def sweep(cfg: SweepConfig) -> list[list]:
    rows = []
    for a in np.linspace(cfg.a_min, cfg.a_max, cfg.steps):
        cat = make_catenoid(cfg.model, float(a))
        rep = certify_catenoid(cat, n_s=cfg.n_s, n_theta=cfg.n_theta)
        rows.append([float(a), cat.s0, cat.R, cat.neck_radius, rep.sup_q, rep.min_hess_eig, rep.passed])
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--model", choices=("hyperbolic", "spherical"), default="hyperbolic")
    p.add_argument("--a-min", type=float)
    p.add_argument("--a-max", type=float)
    p.add_argument("--steps", type=int, default=SweepConfig.steps)
    args = p.parse_args(argv)
    lo, hi = (0.55, 4.0) if args.model == "hyperbolic" else (-0.49, -0.01)
    cfg = SweepConfig(args.model, args.a_min if args.a_min is not None else lo,
                      args.a_max if args.a_max is not None else hi, args.steps)
    rows = sweep(cfg)
    sys.stdout.write(tables.write_csv(("a", "s0", "R", "neck_r", "sup_Q", "min_hess_eig", "pass"), rows))
    print(f"{sum(r[-1] for r in rows)}/{len(rows)} certified", file=sys.stderr)


if __name__ == "__main__":
    main()
