"""Warped-product space forms ``dr^2 + lambda(r)^2 g_S2`` and the Poincare ball.

The three ambient geometries are Euclidean space (``lambda = r``),
hyperbolic space (``lambda = sinh r``) and the open hemisphere
(``lambda = sin r``, radii below pi/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a geometric formula."""


@dataclass(frozen=True)
class SpaceForm:
    curvature_sign: int

    def __post_init__(self):
        if self.curvature_sign not in (-1, 0, 1):
            raise ValueError(f"curvature_sign must be -1, 0 or +1, got {self.curvature_sign!r}")

    @property
    def name(self) -> str:
        return {0: "euclidean", -1: "hyperbolic", 1: "spherical"}[self.curvature_sign]

    @property
    def r_max(self) -> float:
        return math.pi / 2 if self.curvature_sign == 1 else math.inf

    def check_radius(self, r):
        arr = np.asarray(r, dtype=float)
        if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr >= self.r_max):
            raise DomainError(f"radius {r!r} outside [0, {self.r_max}) for {self.name} space")
        return arr

    @classmethod
    def from_name(cls, name: str) -> "SpaceForm":
        try:
            return {"euclidean": EUCLIDEAN, "hyperbolic": HYPERBOLIC, "spherical": SPHERICAL}[name]
        except KeyError:
            raise ValueError(f"unknown space form {name!r}") from None


EUCLIDEAN = SpaceForm(0)
HYPERBOLIC = SpaceForm(-1)
SPHERICAL = SpaceForm(1)


def _result(arr, value):
    return float(value) if np.ndim(arr) == 0 else value


def lam(space: SpaceForm, r):
    """Warping function: r, sinh r or sin r."""
    r = space.check_radius(r)
    k = space.curvature_sign
    if k == 0:
        out = r.copy()
    elif k == -1:
        out = np.sinh(r)
    else:
        out = np.sin(r)
    return _result(r, out)


def lam_prime(space: SpaceForm, r):
    """The potential function lambda'(r)."""
    r = space.check_radius(r)
    k = space.curvature_sign
    if k == 0:
        out = np.ones_like(r)
    elif k == -1:
        out = np.cosh(r)
    else:
        out = np.cos(r)
    return _result(r, out)


def lam_second(space: SpaceForm, r):
    # lambda'' = -k * lambda for all three warpings
    r = space.check_radius(r)
    k = space.curvature_sign
    if k == 0:
        out = np.zeros_like(r)
    elif k == -1:
        out = np.sinh(r)
    else:
        out = -np.sin(r)
    return _result(r, out)


def _ball_norm(z) -> float:
    z = np.asarray(z, dtype=float)
    n = math.hypot(*z.ravel())  # scaled, no underflow for tiny z
    if not np.isfinite(n) or n >= 1.0:
        raise DomainError(f"point {z.tolist()} is not inside the open unit ball (|z| = {n})")
    return n


def poincare_geodesic_radius(z) -> float:
    """Hyperbolic distance from the origin of the Poincare ball to ``z``."""
    n = _ball_norm(z)
    return math.log1p(n) - math.log1p(-n)


def poincare_tanh_radius(z) -> float:
    """``tanh`` of the geodesic radius, in the closed form 2|z|/(1+|z|^2)."""
    n = _ball_norm(z)
    return 2.0 * n / (1.0 + n * n)


def conformal_factor(z) -> tuple[float, np.ndarray]:
    """Return ``rho = 2/(1-|z|^2)`` and its Euclidean gradient ``rho^2 z``."""
    z = np.asarray(z, dtype=float)
    n = _ball_norm(z)
    rho = 2.0 / (1.0 - n * n)
    return rho, rho * rho * z
