"""Pointwise surface data shared by the profile and parametric constructions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaceform import SpaceForm


@dataclass(frozen=True)
class SurfaceSample:
    """One point of a surface in a space form.

    ``frame`` holds the two principal directions as ambient vectors, unit in
    the ambient metric ``metric`` (a diagonal, possibly indefinite), matching
    ``k1`` and ``k2``. ``radial_tangent`` are the components of the unit
    radial field along that frame. Curvatures are taken with respect to
    ``normal``: ``k = <D_e e, N>``.
    """

    space: SpaceForm
    position: np.ndarray
    normal: np.ndarray
    k1: float
    k2: float
    r: float
    support: float
    potential: float
    frame: np.ndarray
    radial_tangent: np.ndarray
    metric: np.ndarray
    radial_normal: float = float("nan")
    param: tuple[float, float] = (float("nan"), float("nan"))

    def inner(self, u, v) -> float:
        return float(np.sum(self.metric * np.asarray(u) * np.asarray(v)))

    @property
    def mean_curvature(self) -> float:
        return self.k1 + self.k2

    @property
    def norm_A_sq(self) -> float:
        return self.k1 * self.k1 + self.k2 * self.k2

    @property
    def Q(self) -> float:
        return self.norm_A_sq * self.support**2 / self.potential**2

    def tangent_coords(self, Y, tol: float = 1e-8) -> np.ndarray:
        """Coordinates of ``Y`` in the principal frame; raises if ``Y`` is not tangent."""
        Y = np.asarray(Y, dtype=float)
        if Y.shape == (2,):
            return Y
        if Y.shape != self.position.shape:
            raise ValueError(f"tangent vector has shape {Y.shape}, expected (2,) or {self.position.shape}")
        coords = np.array([self.inner(Y, e) for e in self.frame])
        resid = Y - coords @ self.frame
        scale = max(1.0, float(np.linalg.norm(Y)))
        if np.linalg.norm(resid) > tol * scale:
            raise ValueError(f"vector {Y.tolist()} is not tangent to the surface (residual {np.linalg.norm(resid):.3e})")
        return coords
