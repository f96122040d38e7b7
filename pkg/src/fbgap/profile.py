"""Rotational minimal annuli in the Poincare ball by shooting.

The annulus is ``z(t, theta) = (t, f(t) cos theta, f(t) sin theta)`` with
``f(0) = c`` and ``f'(0) = 0``. Zero hyperbolic mean curvature reduces to a
second order ODE for ``f``; the free boundary sits at the first zero of
``f - t f'``, where the meridian becomes radial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import spaceform
from .numerics import (
    DEFAULT_CONFIG,
    BracketError,
    IntegrationDomainError,
    NumericalError,
    NumericsConfig,
    find_root_bracketed,
    integrate_ode,
)
from .spaceform import HYPERBOLIC, DomainError, SpaceForm

BOUNDARY_MARGIN = 1e-10
SCAN_C_MIN = 0.01
SCAN_C_MAX = 0.99
SCAN_NODES = 64
DEFAULT_SAMPLES = 401


class NoFreeBoundaryError(NumericalError):
    pass


class RadiusOutOfRangeError(ValueError):
    def __init__(self, radius, r_min, r_max):
        super().__init__(f"R={radius!r} outside the attainable range [{r_min!r}, {r_max!r}] of the c-scan")
        self.radius, self.r_min, self.r_max = radius, r_min, r_max


def profile_rhs(t: float, f: float, fp: float) -> float:
    """f'' from the zero mean curvature condition in the Poincare ball."""
    if not f > 0:
        raise DomainError(f"profile height must be positive, got f={f!r}")
    gap = 1.0 - t * t - f * f
    if not gap > 0:
        raise DomainError(f"point (t={t!r}, f={f!r}) outside the Poincare ball")
    return (1.0 + fp * fp) * (1.0 / f + 4.0 * (f - t * fp) / gap)


@dataclass
class ProfileSolution:
    c: float
    samples: np.ndarray  # columns t, f, fp, fpp
    t_max: float
    R: float
    space: SpaceForm = field(default=HYPERBOLIC)
    n_steps: int = 0

    @property
    def t(self):
        return self.samples[:, 0]

    @property
    def f(self):
        return self.samples[:, 1]

    @property
    def fp(self):
        return self.samples[:, 2]

    @property
    def fpp(self):
        return self.samples[:, 3]

    @property
    def boundary(self) -> np.ndarray:
        return self.samples[-1]

    @property
    def neck_radius(self) -> float:
        return math.log1p(self.c) - math.log1p(-self.c)

    @property
    def boundary_ball_norm(self) -> float:
        t, f = self.samples[-1, 0], self.samples[-1, 1]
        return math.hypot(t, f)

    def sign_conditions(self, tol: float = 0.0) -> dict[str, bool]:
        """Sign facts of the profile on the open interval (0, t_max)."""
        t, f, fp, fpp = self.samples[1:-1].T
        return {
            "fp_nonneg": bool(np.all(fp >= -tol)),
            "fpp_nonneg": bool(np.all(fpp >= -tol)),
            "support_pos": bool(np.all(f - t * fp > -tol)),
            "numerator_pos": bool(np.all(1 + f * f - t * t - 2 * t * f * fp > -tol)),
        }


def _state_rhs(t, y):
    f, fp = y
    if 1.0 - t * t - f * f < BOUNDARY_MARGIN:
        raise DomainError(f"within {BOUNDARY_MARGIN} of the ideal boundary")
    return np.array([fp, profile_rhs(t, f, fp)])


def _support_event(t, y):
    return y[0] - t * y[1]


def solve_profile(c: float, config: NumericsConfig = DEFAULT_CONFIG, samples: int = DEFAULT_SAMPLES) -> ProfileSolution:
    """Shoot from the neck ``(0, c)`` to the free boundary."""
    if not (0.0 < c < 1.0):
        raise DomainError(f"neck value c must lie in (0, 1), got {c!r}")
    if samples < 2:
        raise ValueError("need at least two samples")
    try:
        traj = integrate_ode(_state_rhs, [c, 0.0], (0.0, 1.0), event=_support_event, config=config)
    except IntegrationDomainError as exc:
        raise NoFreeBoundaryError(f"no free boundary for c={c!r}: {exc}") from exc
    if traj.event_t is None:
        raise NoFreeBoundaryError(f"no free boundary for c={c!r}: f - t f' stayed positive")

    t_max = float(traj.event_t)
    grid = np.linspace(0.0, t_max, samples)
    states = traj(grid[:-1])
    states = np.vstack([states, traj.event_y])
    fpp = np.array([profile_rhs(t, f, fp) for t, (f, fp) in zip(grid, states)])
    table = np.column_stack([grid, states[:, 0], states[:, 1], fpp])
    table[0, 1:3] = (c, 0.0)
    table[0, 3] = profile_rhs(0.0, c, 0.0)

    R = spaceform.poincare_geodesic_radius([t_max, traj.event_y[0], 0.0])
    return ProfileSolution(c=float(c), samples=table, t_max=t_max, R=R, n_steps=traj.n_steps)


def free_boundary_radius(c: float, config: NumericsConfig = DEFAULT_CONFIG) -> float:
    return solve_profile(c, config, samples=2).R


@lru_cache(maxsize=16)
def scan_radius_map(config: NumericsConfig = DEFAULT_CONFIG, c_min=SCAN_C_MIN, c_max=SCAN_C_MAX, nodes=SCAN_NODES):
    """Geometric c-grid and the corresponding free-boundary radii."""
    cs = np.geomspace(c_min, c_max, nodes)
    Rs = np.array([free_boundary_radius(float(c), config) for c in cs])
    cs.flags.writeable = False
    Rs.flags.writeable = False
    return cs, Rs


def solve_for_radius(
    R_target: float,
    config: NumericsConfig = DEFAULT_CONFIG,
    samples: int = DEFAULT_SAMPLES,
    scan=None,
) -> ProfileSolution:
    """Find the neck value whose annulus meets the sphere of radius ``R_target`` freely.

    No monotonicity of c -> R(c) is assumed: the first sign change of
    ``R(c) - R_target`` on the scan grid is refined with Brent's method.
    """
    if not (R_target > 0 and math.isfinite(R_target)):
        raise DomainError(f"target radius must be positive, got {R_target!r}")
    cs, Rs = scan if scan is not None else scan_radius_map(config)
    r_lo, r_hi = float(Rs.min()), float(Rs.max())
    if not (r_lo <= R_target <= r_hi):
        raise RadiusOutOfRangeError(R_target, r_lo, r_hi)

    diff = Rs - R_target
    for i in range(len(cs) - 1):
        if diff[i] == 0.0:
            c_star = float(cs[i])
            break
        if diff[i] * diff[i + 1] < 0 or diff[i + 1] == 0.0:
            c_star = find_root_bracketed(
                lambda c: free_boundary_radius(c, config) - R_target, float(cs[i]), float(cs[i + 1]), config.root_tol
            )
            break
    else:  # pragma: no cover - range check above guarantees a bracket
        raise BracketError(f"no bracket for R={R_target!r}")
    return solve_profile(c_star, config, samples)
