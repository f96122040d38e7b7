"""The pinching functional |A|^2 <N, X>^2 / (lambda')^2 and its certification.

On a free boundary annulus the functional should equal 2 on the neck circle,
decrease along the meridian, and vanish on the boundary. Under the bound
Q <= 2 the Hessian of lambda(r)^2 (hyperbolic, Euclidean) or of
Phi(lambda^2), Phi(s) = 1 - sqrt(1 - s) (spherical), is positive semidefinite.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import spaceform
from .catenoid import Catenoid
from .numerics import sym2_eigenvalues
from .profile import ProfileSolution
from .spaceform import HYPERBOLIC, SPHERICAL, DomainError, SpaceForm
from .surface import SurfaceSample

Q_SLACK = 1e-8
HESS_FLOOR = -1e-9
MONO_MARGIN = 1e-10
ENDPOINT_BAND = 1e-6
PROFILE_RESIDUAL_GATE = 1e-8
PARAMETRIC_RESIDUAL_GATE = 1e-8
SUPPORT_GATE = 1e-8


class CertificationRefused(RuntimeError):
    """The surface is not numerically minimal, so Q is meaningless there."""


def conformal_curvatures(t: float, f: float, fp: float, fpp: float) -> tuple[float, float]:
    """Hyperbolic principal curvatures (meridian, parallel) of the Poincare-ball annulus.

    Euclidean curvatures of the profile are transported through the conformal
    factor: ``k = kbar / rho - Nbar(rho) / rho^2`` with ``grad rho = rho^2 z``.
    """
    if not f > 0:
        raise DomainError(f"f must be positive, got {f!r}")
    rho, grad = spaceform.conformal_factor([t, f, 0.0])
    w = math.sqrt(1.0 + fp * fp)
    kb1 = -fpp / w**3
    kb2 = 1.0 / (f * w)
    n_rho = float(np.dot([fp / w, -1.0 / w, 0.0], grad))
    return kb1 / rho - n_rho / rho**2, kb2 / rho - n_rho / rho**2


def eq1_value(t: float, f: float, fp: float) -> float:
    """Closed form of ``k2 * (-<N, d_r>) * tanh r`` along the profile."""
    if not f > 0:
        raise DomainError(f"f must be positive, got {f!r}")
    num = (1 + f * f - t * t - 2 * t * f * fp) * (f - t * fp)
    den = f * (1 + fp * fp) * (1 + t * t + f * f)
    return num / den


def profile_sample(t: float, f: float, fp: float, fpp: float) -> SurfaceSample:
    """Surface data at the theta = 0 point of the Poincare-ball annulus.

    ``k1`` is the meridian curvature and ``k2`` the parallel one.
    """
    z = np.array([t, f, 0.0])
    rho, _ = spaceform.conformal_factor(z)
    k1, k2 = conformal_curvatures(t, f, fp, fpp)
    w = math.sqrt(1.0 + fp * fp)
    zn = math.hypot(t, f)
    r = spaceform.poincare_geodesic_radius(z)
    radial_normal = (t * fp - f) / (w * zn)
    frame = np.array([[1.0 / w, fp / w, 0.0], [0.0, 0.0, 1.0]]) / rho
    return SurfaceSample(
        space=HYPERBOLIC,
        position=z,
        normal=np.array([fp, -1.0, 0.0]) / (w * rho),
        k1=k1,
        k2=k2,
        r=r,
        support=math.sinh(r) * radial_normal,
        potential=math.cosh(r),
        frame=frame,
        radial_tangent=np.array([(t + f * fp) / (w * zn), 0.0]),
        metric=np.full(3, rho * rho),
        radial_normal=radial_normal,
        param=(t, 0.0),
    )


def pinch_Q(sample: SurfaceSample) -> float:
    if not sample.potential > 1e-10:
        raise DomainError(f"potential lambda' = {sample.potential!r} too small; sample at the hemisphere edge")
    return sample.Q


# ---------------------------------------------------------------------------
# Hessians


def hessian_matrix(space: SpaceForm, sample: SurfaceSample) -> np.ndarray:
    """Hessian of lambda(r)^2 on the surface, in the principal frame."""
    lam = spaceform.lam(space, sample.r)
    dlam = spaceform.lam_prime(space, sample.r)
    ddlam = spaceform.lam_second(space, sample.r)
    p = sample.radial_tangent
    sigma = sample.support
    return (
        2 * lam * ddlam * np.outer(p, p)
        + 2 * dlam**2 * np.eye(2)
        + 2 * dlam * sigma * np.diag([sample.k1, sample.k2])
    )


def _phi_derivs(one_minus_s: float) -> tuple[float, float]:
    # Phi'(s), Phi''(s) given 1 - s; with s = sin^2 r pass cos^2 r to avoid cancellation
    return 0.5 * one_minus_s**-0.5, 0.25 * one_minus_s**-1.5


def hessian_matrix_spherical(sample: SurfaceSample) -> np.ndarray:
    """Hessian of Phi(lambda^2), Phi(s) = 1 - sqrt(1 - s), in the principal frame."""
    lam = spaceform.lam(SPHERICAL, sample.r)
    dlam = spaceform.lam_prime(SPHERICAL, sample.r)
    d1, d2 = _phi_derivs(dlam * dlam)
    p = sample.radial_tangent
    return d2 * 4 * lam**2 * dlam**2 * np.outer(p, p) + d1 * hessian_matrix(SPHERICAL, sample)


def hessian_form(space: SpaceForm, sample: SurfaceSample, Y, Z) -> float:
    y, z = sample.tangent_coords(Y), sample.tangent_coords(Z)
    return float(y @ hessian_matrix(space, sample) @ z)


def hessian_form_spherical(sample: SurfaceSample, Y, Z) -> float:
    y, z = sample.tangent_coords(Y), sample.tangent_coords(Z)
    return float(y @ hessian_matrix_spherical(sample) @ z)


def spherical_identity_residual(r: float) -> float:
    """``2 Phi'' lambda^2 lambda'^2 + Phi' lambda lambda''`` at ``s = sin^2 r``; vanishes identically."""
    if not 0 < r < math.pi / 2:
        raise DomainError(f"r must lie in (0, pi/2), got {r!r}")
    lam, dlam, ddlam = math.sin(r), math.cos(r), -math.sin(r)
    d1, d2 = _phi_derivs(dlam * dlam)
    return 2 * d2 * lam**2 * dlam**2 + d1 * lam * ddlam


def min_hessian_eigenvalue(space: SpaceForm, sample: SurfaceSample) -> float:
    H = hessian_matrix_spherical(sample) if space.curvature_sign == 1 else hessian_matrix(space, sample)
    return sym2_eigenvalues(H[0, 0], 0.5 * (H[0, 1] + H[1, 0]), H[1, 1])[0]


def hessian_psd_report(space: SpaceForm, samples) -> float:
    """Smallest Hessian eigenvalue over ``samples`` (Phi-composed on the sphere)."""
    return min(min_hessian_eigenvalue(space, s) for s in samples)


# ---------------------------------------------------------------------------
# certification


@dataclass
class CertificationReport:
    sup_q: float
    argmax_t: float
    boundary_q: float
    monotone: bool
    min_hess_eig: float
    max_mean_curv_residual: float
    max_boundary_support_residual: float

    def checks(self, slack: float = Q_SLACK, hess_floor: float = HESS_FLOOR) -> dict[str, bool]:
        checks = {
            "sup_q": self.sup_q <= 2 + slack,
            "neck_equality": abs(self.sup_q - 2) <= slack and self.argmax_t == 0.0,
            "boundary_q": abs(self.boundary_q) <= slack,
            "monotone": self.monotone,
            "hessian_psd": self.min_hess_eig >= hess_floor,
            "boundary_support": self.max_boundary_support_residual <= SUPPORT_GATE,
        }
        return {k: bool(v) for k, v in checks.items()}

    @property
    def passed(self) -> bool:
        return all(self.checks().values())

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CertificationReport":
        return cls(**json.loads(text))


def strictly_decreasing(x, y, margin: float = MONO_MARGIN, band: float = ENDPOINT_BAND) -> bool:
    """Discrete differences of ``y`` below ``-margin`` except for pairs touching the endpoint bands."""
    x, y = np.asarray(x), np.asarray(y)
    lo, hi = x[0] + band, x[-1] - band
    diffs = np.diff(y)
    inside = (x[:-1] >= lo) & (x[1:] <= hi)
    # the first and last pair always start/end on an endpoint; keep them when the grid is coarser than the band
    inside[0] |= x[1] - x[0] > band
    inside[-1] |= x[-1] - x[-2] > band
    return bool(np.all(diffs[inside] < -margin))


def profile_samples(solution: ProfileSolution) -> list[SurfaceSample]:
    return [profile_sample(*row) for row in solution.samples]


def certify_profile(solution: ProfileSolution, residual_gate: float = PROFILE_RESIDUAL_GATE) -> CertificationReport:
    samples = profile_samples(solution)
    resid = max(abs(s.mean_curvature) for s in samples)
    if resid > residual_gate:
        raise CertificationRefused(f"max |k1 + k2| = {resid:.3e} exceeds gate {residual_gate:.1e}")
    Q = np.array([pinch_Q(s) for s in samples])
    e1 = np.array([eq1_value(t, f, fp) for t, f, fp, _ in solution.samples])
    i = int(np.argmax(Q))
    return CertificationReport(
        sup_q=float(Q[i]),
        argmax_t=float(solution.samples[i, 0]),
        boundary_q=float(Q[-1]),
        monotone=strictly_decreasing(solution.t, e1),
        min_hess_eig=float(hessian_psd_report(HYPERBOLIC, samples)),
        max_mean_curv_residual=float(resid),
        max_boundary_support_residual=float(abs(samples[-1].radial_normal)),
    )


def catenoid_samples(cat: Catenoid, n_s: int = 401, n_theta: int = 8) -> list[SurfaceSample]:
    """Samples on the grid [-s0, s0] x [0, 2 pi); ``n_s`` odd so the neck is included."""
    if n_s % 2 == 0:
        n_s += 1
    s0 = cat.s0
    ss = np.linspace(-s0, s0, n_s)
    ss[n_s // 2] = 0.0
    th = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    return [cat.sample(float(s), float(t)) for s in ss for t in th]


def certify_catenoid(cat: Catenoid, n_s: int = 401, n_theta: int = 8,
                     residual_gate: float = PARAMETRIC_RESIDUAL_GATE) -> CertificationReport:
    samples = catenoid_samples(cat, n_s, n_theta)
    resid = max(abs(s.mean_curvature) for s in samples)
    if resid > residual_gate:
        raise CertificationRefused(f"max |H| = {resid:.3e} exceeds gate {residual_gate:.1e}")
    Q = np.array([pinch_Q(s) for s in samples])
    i = int(np.argmax(Q))
    # meridian profile at theta = 0, neck to boundary
    mer = [s for s in samples if s.param[1] == 0.0 and s.param[0] >= 0.0]
    mer.sort(key=lambda s: s.param[0])
    ends = [s for s in samples if abs(abs(s.param[0]) - cat.s0) == 0.0]
    return CertificationReport(
        sup_q=float(Q[i]),
        argmax_t=abs(samples[i].param[0]),
        boundary_q=float(max(pinch_Q(s) for s in ends)),
        monotone=strictly_decreasing([s.param[0] for s in mer], [pinch_Q(s) for s in mer]),
        min_hess_eig=float(hessian_psd_report(cat.space, samples)),
        max_mean_curv_residual=float(resid),
        max_boundary_support_residual=float(max(abs(s.radial_normal) for s in ends)),
    )
