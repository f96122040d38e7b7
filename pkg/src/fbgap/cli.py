"""Command-line front end.

    fbgap shoot  --space hyperbolic --c 0.5
    fbgap solve  --space hyperbolic --radius 1.0
    fbgap verify --space spherical --a -0.25
    fbgap family --space hyperbolic --c-min 0.1 --c-max 0.9 --steps 9
    fbgap export --space hyperbolic --a 1 --out grid.csv

Exit codes: 0 success, 1 certification failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import io as tables
from .catenoid import make_catenoid
from .numerics import NumericalError, NumericsConfig
from .pinch import CertificationRefused, certify_catenoid, certify_profile, profile_samples
from .profile import RadiusOutOfRangeError, solve_for_radius, solve_profile
from .spaceform import DomainError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SPACES = ("euclidean", "hyperbolic", "spherical")
MODES = ("shoot", "solve", "verify", "family", "export")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    space: str = "hyperbolic"
    mode: str = "verify"
    c: float | None = None
    a_param: float | None = None
    radius: float | None = None
    samples: int = 401
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    out_path: str | None = None
    format: str = "json"
    param_min: float | None = None
    param_max: float | None = None
    steps: int | None = None
    jobs: int = 1
    kind: str = "auto"

    def validate(self):
        if self.space not in SPACES:
            raise UsageError(f"--space must be one of {SPACES}")
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {MODES}")
        if self.samples < 16:
            raise UsageError("--samples must be at least 16")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.mode == "family":
            return
        given = [n for n in ("c", "a_param", "radius") if getattr(self, n) is not None]
        if len(given) > 1:
            raise UsageError("give exactly one of --c, --a, --radius")
        if not given and self.space != "euclidean":
            raise UsageError("give exactly one of --c, --a, --radius")
        if self.c is not None:
            if self.space != "hyperbolic":
                raise UsageError("--c (profile shooting) is only available for --space hyperbolic")
            if not 0 < self.c < 1:
                raise UsageError(f"--c must lie in (0, 1), got {self.c}")
        if self.a_param is not None:
            if self.space == "hyperbolic" and not self.a_param > 0.5:
                raise UsageError(f"hyperbolic catenoids need --a > 1/2, got {self.a_param}")
            if self.space == "spherical" and not -0.5 < self.a_param < 0:
                raise UsageError(f"spherical catenoids need -1/2 < --a < 0, got {self.a_param}")
            if self.space == "euclidean":
                raise UsageError("the euclidean critical catenoid takes --radius, not --a")
        if self.radius is not None:
            if not self.radius > 0:
                raise UsageError("--radius must be positive")
            if self.space == "spherical":
                raise UsageError("spherical catenoids are selected by --a")
        if self.mode == "shoot" and (self.space != "hyperbolic" or self.c is None):
            raise UsageError("shoot needs --space hyperbolic and --c; euclidean uses the catenoid regression path")


# ---------------------------------------------------------------------------
# config file: "key = value" lines, '#' comments


def read_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


_NUMERIC_KEYS = {f.name for f in fields(NumericsConfig)}
_FLOAT_KEYS = {"c", "a_param", "radius", "param_min", "param_max"}
_INT_KEYS = {"samples", "steps", "jobs"}


def build_run_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = read_config_file(args.config) if getattr(args, "config", None) else {}
    if "a" in file_cfg:
        file_cfg["a_param"] = file_cfg.pop("a")
    merged: dict = {}
    numerics: dict = {}
    for key, value in file_cfg.items():
        if key in _NUMERIC_KEYS:
            numerics[key] = value
        elif key in _FLOAT_KEYS:
            merged[key] = float(value)
        elif key in _INT_KEYS:
            merged[key] = int(value)
        elif key in {"space", "format", "out_path", "kind"}:
            merged[key] = value
        else:
            raise UsageError(f"unknown config key {key!r}")
    for key in _NUMERIC_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            numerics[key] = value
    for key in _FLOAT_KEYS | _INT_KEYS | {"space", "format", "out_path", "kind"}:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    try:
        num = NumericsConfig.from_dict(numerics)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cfg = RunConfig(mode=args.mode, numerics=num, **merged)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _construct(cfg: RunConfig):
    """Profile solution (hyperbolic --c/--radius) or parametric catenoid."""
    if cfg.space == "hyperbolic" and cfg.c is not None:
        return solve_profile(cfg.c, cfg.numerics, cfg.samples)
    if cfg.space == "hyperbolic" and cfg.radius is not None:
        return solve_for_radius(cfg.radius, cfg.numerics, cfg.samples)
    if cfg.space == "euclidean":
        return make_catenoid("euclidean", cfg.radius, cfg.numerics)
    return make_catenoid(cfg.space, cfg.a_param, cfg.numerics)


def _profile_summary(sol) -> dict:
    resid = max(abs(s.mean_curvature) for s in profile_samples(sol))
    return {"c": sol.c, "t_max": sol.t_max, "R": sol.R, "max_minimality_residual": resid}


def cmd_shoot(cfg: RunConfig) -> int:
    sol = solve_profile(cfg.c, cfg.numerics, cfg.samples)
    print(json.dumps(_profile_summary(sol), indent=2))
    if cfg.out_path:
        _emit(tables.dump_table(tables.PROFILE_COLUMNS, tables.profile_rows(sol), cfg.format, {"c": sol.c}), cfg.out_path)
    return EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    obj = _construct(cfg)
    if hasattr(obj, "samples"):
        summary = _profile_summary(obj)
        if cfg.radius is not None:
            summary["R_target"] = cfg.radius
    else:
        s0, R = obj.free_boundary
        summary = {"model": obj.model, "a": obj.a, "s0": s0, "R": R, "neck_r": obj.neck_radius}
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _certify(obj, samples: int):
    if hasattr(obj, "samples"):
        return certify_profile(obj)
    return certify_catenoid(obj, n_s=samples)


def cmd_verify(cfg: RunConfig) -> int:
    obj = _construct(cfg)
    report = _certify(obj, cfg.samples)
    _emit(report.to_json() + "\n", cfg.out_path)
    failed = [k for k, ok in report.checks().items() if not ok]
    if failed:
        print(f"certification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _family_member(args) -> list:
    space, kind, value, numerics, samples = args
    if kind == "c":
        obj = solve_profile(value, numerics, samples)
        end, R, neck = obj.t_max, obj.R, obj.neck_radius
    else:
        obj = make_catenoid(space, value, numerics)
        (end, R), neck = obj.free_boundary, obj.neck_radius
    rep = _certify(obj, samples)
    return [value, end, R, neck, rep.sup_q, rep.passed]


def family_table(cfg: RunConfig) -> list[list]:
    if cfg.steps is None or cfg.steps < 1:
        raise UsageError("--steps must be a positive integer")
    if cfg.param_min is None or cfg.param_max is None:
        raise UsageError("family needs --min and --max")
    if cfg.param_max < cfg.param_min or (cfg.steps > 1 and cfg.param_max == cfg.param_min):
        raise UsageError(f"empty or inverted range [{cfg.param_min}, {cfg.param_max}]")
    if cfg.space == "euclidean":
        raise UsageError("the euclidean critical catenoid has no family parameter")
    kind = "c" if cfg.space == "hyperbolic" and cfg.kind in ("auto", "c") else "a"
    values = np.linspace(cfg.param_min, cfg.param_max, cfg.steps).tolist()
    for v in values:
        if kind == "c" and not 0 < v < 1:
            raise UsageError(f"family value c={v} outside (0, 1)")
        if kind == "a" and cfg.space == "hyperbolic" and not v > 0.5:
            raise UsageError(f"family value a={v} not > 1/2")
        if cfg.space == "spherical" and not -0.5 < v < 0:
            raise UsageError(f"family value a={v} outside (-1/2, 0)")
    jobs = [(cfg.space, kind, v, cfg.numerics, cfg.samples) for v in values]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_family_member, jobs))  # map keeps parameter order
    return [_family_member(j) for j in jobs]


def cmd_family(cfg: RunConfig) -> int:
    rows = family_table(cfg)
    _emit(tables.dump_table(tables.FAMILY_COLUMNS, rows, cfg.format, {"space": cfg.space}), cfg.out_path)
    return EXIT_OK if all(r[-1] for r in rows) else EXIT_FAIL


def cmd_export(cfg: RunConfig) -> int:
    obj = _construct(cfg)
    if hasattr(obj, "samples"):
        if cfg.kind == "surface":
            cols, rows = tables.SURFACE_COLUMNS, tables.profile_surface_rows(obj)
        else:
            cols, rows = tables.PROFILE_COLUMNS, tables.profile_rows(obj)
        meta = {"c": obj.c, "t_max": obj.t_max, "R": obj.R}
    else:
        cols, rows = tables.SURFACE_COLUMNS, tables.catenoid_surface_rows(obj, n_s=cfg.samples)
        meta = {"model": obj.model, "a": obj.a, "s0": obj.s0, "R": obj.R}
    _emit(tables.dump_table(cols, rows, cfg.format, meta), cfg.out_path)
    return EXIT_OK


COMMANDS = {"shoot": cmd_shoot, "solve": cmd_solve, "verify": cmd_verify, "family": cmd_family, "export": cmd_export}


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", choices=SPACES)
    common.add_argument("--c", type=float, help="neck value of the Poincare-ball profile (hyperbolic)")
    common.add_argument("--a", dest="a_param", type=float, help="catenoid parameter a")
    common.add_argument("--radius", type=float, help="ball radius R")
    common.add_argument("--samples", type=int, help="grid density (>= 16)")
    common.add_argument("--config", help="file of 'key = value' lines; flags override it")
    common.add_argument("--out", dest="out_path")
    common.add_argument("--format", choices=("csv", "json"))
    for f in fields(NumericsConfig):
        common.add_argument("--" + f.name.replace("_", "-"), dest=f.name, type=int if f.name == "max_steps" else float)

    parser = argparse.ArgumentParser(prog="fbgap", description="Free boundary minimal annuli and the pinching gap.")
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("shoot", parents=[common], help="integrate the profile ODE for one neck value")
    sub.add_parser("solve", parents=[common], help="locate the free boundary (or c for a given radius)")
    sub.add_parser("verify", parents=[common], help="certify the pinching bound on one annulus")
    fam = sub.add_parser("family", parents=[common], help="certify a parameter sweep")
    fam.add_argument("--min", "--c-min", "--a-min", dest="param_min", type=float)
    fam.add_argument("--max", "--c-max", "--a-max", dest="param_max", type=float)
    fam.add_argument("--steps", type=int)
    fam.add_argument("--param", dest="kind", choices=("c", "a"), help="hyperbolic sweep over c (default) or a")
    fam.add_argument("--jobs", type=int)
    exp = sub.add_parser("export", parents=[common], help="write profile or surface-grid tables")
    exp.add_argument("--kind", choices=("auto", "surface"))
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = build_run_config(args)
        return COMMANDS[cfg.mode](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RadiusOutOfRangeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CertificationRefused as exc:
        print(f"certification refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NumericalError, DomainError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
