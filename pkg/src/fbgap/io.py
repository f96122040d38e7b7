"""CSV and JSON tables with round-trip-exact floats."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .catenoid import Catenoid
from .pinch import pinch_Q, profile_sample
from .profile import ProfileSolution

PROFILE_COLUMNS = ("t", "f", "fp", "fpp")
SURFACE_COLUMNS = ("s", "theta", "y1", "y2", "y3", "y4", "k1", "k2", "r", "support", "Q")
FAMILY_COLUMNS = ("param", "t_max_or_s0", "R", "neck_r", "sup_Q", "pass")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return format(float(x), ".17g")


def _parse(x: str):
    if x in ("true", "false"):
        return x == "true"
    return float(x)


def write_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[str], list[list]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, [[_parse(v) for v in row] for row in reader if row]


def write_json(columns, rows, meta: dict | None = None) -> str:
    # json uses repr() for floats: shortest string that round-trips exactly
    doc = dict(meta or {})
    doc["columns"] = list(columns)
    doc["rows"] = [[v if isinstance(v, bool) else float(v) for v in row] for row in rows]
    return json.dumps(doc, indent=1) + "\n"


def read_json(text: str) -> tuple[list[str], list[list], dict]:
    doc = json.loads(text)
    columns, rows = doc.pop("columns"), doc.pop("rows")
    return columns, rows, doc


def dump_table(columns, rows, fmt_name: str, meta: dict | None = None) -> str:
    if fmt_name == "csv":
        return write_csv(columns, rows)
    if fmt_name == "json":
        return write_json(columns, rows, meta)
    raise ValueError(f"unknown format {fmt_name!r}")


def load_table(text: str, fmt_name: str):
    if fmt_name == "csv":
        return read_csv(text)
    if fmt_name == "json":
        columns, rows, _ = read_json(text)
        return columns, rows
    raise ValueError(f"unknown format {fmt_name!r}")


# ---------------------------------------------------------------------------


def profile_rows(solution: ProfileSolution) -> list[list[float]]:
    return solution.samples.tolist()


def poincare_to_hyperboloid(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    n2 = float(z @ z)
    return np.concatenate([2 * z, [1 + n2]]) / (1 - n2)


def profile_surface_rows(solution: ProfileSolution, n_theta: int = 16) -> list[list[float]]:
    """Surface grid of the profile annulus, mapped to hyperboloid coordinates; ``s`` is the t-coordinate."""
    rows = []
    thetas = np.linspace(0.0, 2 * math.pi, n_theta, endpoint=False)
    for t, f, fp, fpp in solution.samples:
        smp = profile_sample(t, f, fp, fpp)
        q = pinch_Q(smp)
        for th in thetas:
            y = poincare_to_hyperboloid([t, f * math.cos(th), f * math.sin(th)])
            rows.append([t, th, *y, smp.k1, smp.k2, smp.r, smp.support, q])
    return rows


def catenoid_surface_rows(cat: Catenoid, n_s: int = 101, n_theta: int = 16) -> list[list[float]]:
    rows = []
    s0 = cat.s0
    for s in np.linspace(-s0, s0, n_s):
        for th in np.linspace(0.0, 2 * math.pi, n_theta, endpoint=False):
            smp = cat.sample(float(s), float(th))
            y = list(smp.position) + [0.0] * (4 - len(smp.position))
            rows.append([s, th, *y, smp.k1, smp.k2, smp.r, smp.support, pinch_Q(smp)])
    return rows
