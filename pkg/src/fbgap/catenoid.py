"""Closed-form rotational catenoids and Lorentz algebra.

Hyperbolic catenoids live on the hyperboloid ``<y, y>_1 = -1`` of R^4 with
signature (+, +, +, -); spherical ones on the unit sphere of R^4. Both rotate
about the (y3, y4)-plane and are parametrized by meridian arclength ``s``.
The Euclidean critical catenoid in a round ball is included as a regression
anchor. Balls are centered at e4 = (0, 0, 0, 1) (at the origin for R^3).
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache

import numpy as np

from .numerics import (
    DEFAULT_CONFIG,
    NumericalError,
    NumericsConfig,
    fd_derivative,
    find_root_bracketed,
    gauss_legendre,
    quad_adaptive,
)
from .spaceform import EUCLIDEAN, HYPERBOLIC, SPHERICAL, DomainError
from .surface import SurfaceSample

LORENTZ = np.array([1.0, 1.0, 1.0, -1.0])
EUCLID4 = np.ones(4)
E = np.eye(4)

MODELS = ("hyperbolic", "spherical", "euclidean")


def lorentz_inner(v, w) -> float:
    v, w = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
    return float(v[0] * w[0] + v[1] * w[1] + v[2] * w[2] - v[3] * w[3])


def _cofactors(v1, v2, v3) -> np.ndarray:
    # det(v1, v2, v3, v) = cofactors . v
    m = np.array([v1, v2, v3], dtype=float)
    out = np.empty(4)
    for i in range(4):
        cols = [j for j in range(4) if j != i]
        out[i] = (-1) ** (i + 3) * np.linalg.det(m[:, cols])
    return out


def cross4(v1, v2, v3, metric=EUCLID4) -> np.ndarray:
    """Vector ``w`` with ``<w, v> = det(v1, v2, v3, v)`` for a diagonal metric."""
    return _cofactors(v1, v2, v3) / metric


def lorentz_cross(v1, v2, v3) -> np.ndarray:
    return cross4(v1, v2, v3, LORENTZ)


def _sqrt_jet(x, dx, ddx):
    if not x > 0:
        raise DomainError(f"radicand {x!r} is not positive")
    q = math.sqrt(x)
    return q, dx / (2 * q), ddx / (2 * q) - dx * dx / (4 * q * x)


class Catenoid:
    """Base class: a rotational surface ``(rad cos th, rad sin th, *tail)``."""

    model: str
    space = None
    metric = EUCLID4
    scan_limit = 8.0
    scan_step = 0.01

    def __init__(self, config: NumericsConfig = DEFAULT_CONFIG):
        self.config = config

    # subclasses provide the meridian jet: (rad, rad', rad''), (tail, tail', tail'')
    def meridian_jet(self, s):
        raise NotImplementedError

    def jet(self, s: float, theta: float):
        """F and its first and second partial derivatives in (s, theta)."""
        (q, dq, ddq), (tl, dtl, ddtl) = self.meridian_jet(s)
        c, sn = math.cos(theta), math.sin(theta)
        z = np.zeros_like(tl)
        F = np.concatenate([[q * c, q * sn], tl])
        Fs = np.concatenate([[dq * c, dq * sn], dtl])
        Ft = np.concatenate([[-q * sn, q * c], z])
        Fss = np.concatenate([[ddq * c, ddq * sn], ddtl])
        Fst = np.concatenate([[-dq * sn, dq * c], z])
        Ftt = np.concatenate([[-q * c, -q * sn], z])
        return F, Fs, Ft, Fss, Fst, Ftt

    def point(self, s: float, theta: float) -> np.ndarray:
        return self.jet(s, theta)[0]

    def inner(self, u, v) -> float:
        return float(np.sum(self.metric * u * v))

    def quadric_residual(self, F) -> float:
        raise NotImplementedError

    def unit_normal(self, F, Fs, Ft) -> np.ndarray:
        n = cross4(F, Fs, Ft, self.metric)
        n = n / math.sqrt(self.inner(n, n))
        # orient toward the rotation axis
        if n[0] * F[0] + n[1] * F[1] > 0:
            n = -n
        return n

    # geometry of the ball centered at e4
    def geodesic_radius(self, F) -> float:
        raise NotImplementedError

    def radial_unit(self, F, r) -> np.ndarray:
        raise NotImplementedError

    # ------------------------------------------------------------------
    def _sample_from_derivatives(self, F, Fs, Ft, Fss, Fst, Ftt, param) -> SurfaceSample:
        N = self.unit_normal(F, Fs, Ft)
        g = np.array([[self.inner(Fs, Fs), self.inner(Fs, Ft)], [self.inner(Fs, Ft), self.inner(Ft, Ft)]])
        h = np.array([[self.inner(Fss, N), self.inner(Fst, N)], [self.inner(Fst, N), self.inner(Ftt, N)]])
        if not (g[0, 0] > 0 and np.linalg.det(g) > 0):
            raise NumericalError(f"degenerate tangent frame at {param}")
        L = np.linalg.cholesky(g)
        Linv = np.linalg.inv(L)
        shape = Linv @ h @ Linv.T
        evals, evecs = np.linalg.eigh(0.5 * (shape + shape.T))
        order = [1, 0]  # k1 >= k2
        k = evals[order]
        coeffs = Linv.T @ evecs[:, order]  # columns: principal directions in (Fs, Ft) coordinates
        frame = np.array([coeffs[0, i] * Fs + coeffs[1, i] * Ft for i in range(2)])

        r = self.geodesic_radius(F)
        u = self.radial_unit(F, r)
        lam, dlam = self.space_lambda(r)
        radial_normal = self.inner(N, u)
        return SurfaceSample(
            space=self.space,
            position=F,
            normal=N,
            k1=float(k[0]),
            k2=float(k[1]),
            r=r,
            support=lam * radial_normal,
            potential=dlam,
            frame=frame,
            radial_tangent=np.array([self.inner(u, e) for e in frame]),
            metric=self.metric,
            radial_normal=radial_normal,
            param=(float(param[0]), float(param[1])),
        )

    def space_lambda(self, r):
        raise NotImplementedError

    def sample(self, s: float, theta: float = 0.0) -> SurfaceSample:
        """Surface data from the analytic jet."""
        return self._sample_from_derivatives(*self.jet(s, theta), (s, theta))

    def sample_fd(self, s: float, theta: float = 0.0, fd_step: float = 1e-3) -> SurfaceSample:
        """Surface data with all derivatives taken by Richardson central differences of ``point``."""
        F = self.point(s, theta)
        Fs = fd_derivative(lambda x: self.point(x, theta), s, 1, fd_step)
        Ft = fd_derivative(lambda x: self.point(s, x), theta, 1, fd_step)
        Fss = fd_derivative(lambda x: self.point(x, theta), s, 2, fd_step)
        Ftt = fd_derivative(lambda x: self.point(s, x), theta, 2, fd_step)
        Fst = fd_derivative(lambda x: fd_derivative(lambda y: self.point(x, y), theta, 1, fd_step), s, 1, fd_step)
        return self._sample_from_derivatives(F, Fs, Ft, Fss, Fst, Ftt, (s, theta))

    # ------------------------------------------------------------------
    def boundary_function(self, s: float) -> float:
        """Zero exactly when the meridian tangent line at theta = 0 passes through the center axis."""
        (q, dq, _), (tl, dtl, _) = self.meridian_jet(s)
        return q * dtl[0] - tl[0] * dq

    @cached_property
    def free_boundary(self) -> tuple[float, float]:
        """First positive root ``s0`` of the tangent-line criterion and the ball radius ``R``."""
        n = int(round(self.scan_limit / self.scan_step))
        grid = np.linspace(self.scan_step, self.scan_limit, n)
        prev_s, prev_h = grid[0], self.boundary_function(grid[0])
        for s in grid[1:]:
            h = self.boundary_function(s)
            if prev_h == 0.0:
                s0 = prev_s
                break
            if prev_h * h <= 0:
                s0 = find_root_bracketed(self.boundary_function, float(prev_s), float(s), self.config.root_tol)
                break
            prev_s, prev_h = s, h
        else:
            raise NumericalError(f"no free boundary root for {self!r} in (0, {self.scan_limit}]")
        return float(s0), self.geodesic_radius(self.point(s0, 0.0))

    @property
    def s0(self) -> float:
        return self.free_boundary[0]

    @property
    def R(self) -> float:
        return self.free_boundary[1]

    @property
    def neck_radius(self) -> float:
        return self.geodesic_radius(self.point(0.0, 0.0))


class _QuadricCatenoid(Catenoid):
    """Shared machinery for the hyperboloid and sphere families (phi table etc.)."""

    table_step = 0.05

    def __init__(self, a: float, config: NumericsConfig = DEFAULT_CONFIG):
        super().__init__(config)
        self.a = float(a)
        self._nodes = [0.0]
        self._cum = [0.0]

    def __repr__(self):
        return f"{type(self).__name__}(a={self.a!r})"

    def phi_integrand(self, t):
        raise NotImplementedError

    def _extend_table(self, s_abs):
        while self._nodes[-1] < s_abs:
            lo = self._nodes[-1]
            hi = lo + self.table_step
            self._cum.append(self._cum[-1] + quad_adaptive(self.phi_integrand, lo, hi, self.config.quad_tol))
            self._nodes.append(hi)

    def phi(self, s: float) -> float:
        """phi(s) from the cumulative table plus a Gauss-Legendre remainder."""
        s_abs = abs(s)
        self._extend_table(s_abs)
        k = int(s_abs // self.table_step)
        k = min(k, len(self._nodes) - 1)
        base = self._nodes[k]
        val = self._cum[k]
        if s_abs > base:
            val += gauss_legendre(self.phi_integrand, base, s_abs, 20)
        return math.copysign(val, s) if s != 0 else 0.0

    def phi_jet(self, s):
        raise NotImplementedError

    def geodesic_radius(self, F) -> float:
        raise NotImplementedError


class CatenoidMinkowski(_QuadricCatenoid):
    """Rotational minimal catenoid in the hyperboloid model, ``a > 1/2``."""

    model = "hyperbolic"
    space = HYPERBOLIC
    metric = LORENTZ
    scan_limit = 8.0

    def __init__(self, a: float, config: NumericsConfig = DEFAULT_CONFIG):
        if not a > 0.5:
            raise DomainError(f"hyperbolic catenoid needs a > 1/2, got {a!r}")
        super().__init__(a, config)
        self.k = math.sqrt(a * a - 0.25)

    def phi_integrand(self, t):
        ch = np.cosh(2 * t)
        return self.k / ((self.a * ch + 0.5) * np.sqrt(self.a * ch - 0.5))

    def meridian_jet(self, s):
        a = self.a
        ch, sh = math.cosh(2 * s), math.sinh(2 * s)
        d1, d2 = 2 * a * sh, 4 * a * ch
        rad = _sqrt_jet(a * ch - 0.5, d1, d2)
        qq, dqq, ddqq = _sqrt_jet(a * ch + 0.5, d1, d2)
        p = self.phi(s)
        dp = self.k / ((a * ch + 0.5) * rad[0])
        ddp = -dp * (d1 / (a * ch + 0.5) + d1 / (2 * (a * ch - 0.5)))
        hs, hc = math.sinh(p), math.cosh(p)
        u = np.array([hs, hc])
        du = np.array([hc, hs])
        tail = qq * u
        dtail = dqq * u + qq * dp * du
        ddtail = ddqq * u + 2 * dqq * dp * du + qq * (ddp * du + dp * dp * u)
        return rad, (tail, dtail, ddtail)

    def quadric_residual(self, F) -> float:
        return lorentz_inner(F, F) + 1.0

    def geodesic_radius(self, F) -> float:
        return math.acosh(max(1.0, F[3]))

    def radial_unit(self, F, r):
        return (math.cosh(r) * F - E[3]) / math.sinh(r)

    def space_lambda(self, r):
        return math.sinh(r), math.cosh(r)


class CatenoidSpherical(_QuadricCatenoid):
    """Rotational minimal catenoid in the unit 3-sphere, ``-1/2 < a < 0``."""

    model = "spherical"
    space = SPHERICAL
    metric = EUCLID4
    scan_limit = math.pi / 2

    def __init__(self, a: float, config: NumericsConfig = DEFAULT_CONFIG):
        if not -0.5 < a < 0:
            raise DomainError(f"spherical catenoid needs -1/2 < a < 0, got {a!r}")
        super().__init__(a, config)
        self.k = math.sqrt(0.25 - a * a)

    def phi_integrand(self, t):
        c = np.cos(2 * t)
        rad = 0.5 + self.a * c
        if np.any(rad <= 0):
            raise DomainError("spherical phi integrand radicand is not positive")
        return self.k / ((0.5 - self.a * c) * np.sqrt(rad))

    def meridian_jet(self, s):
        a = self.a
        c2, s2 = math.cos(2 * s), math.sin(2 * s)
        d1, d2 = -2 * a * s2, -4 * a * c2
        rad = _sqrt_jet(0.5 + a * c2, d1, d2)
        qq, dqq, ddqq = _sqrt_jet(0.5 - a * c2, -d1, -d2)
        p = self.phi(s)
        dp = self.k / ((0.5 - a * c2) * rad[0])
        ddp = -dp * (-d1 / (0.5 - a * c2) + d1 / (2 * (0.5 + a * c2)))
        sp, cp = math.sin(p), math.cos(p)
        u = np.array([sp, cp])
        du = np.array([cp, -sp])
        tail = qq * u
        dtail = dqq * u + qq * dp * du
        ddtail = ddqq * u + 2 * dqq * dp * du + qq * (ddp * du - dp * dp * u)
        return rad, (tail, dtail, ddtail)

    def quadric_residual(self, F) -> float:
        return float(np.dot(F, F)) - 1.0

    def geodesic_radius(self, F) -> float:
        return math.acos(min(1.0, max(-1.0, F[3])))

    def radial_unit(self, F, r):
        return (math.cos(r) * F - E[3]) / math.sin(r)

    def space_lambda(self, r):
        if math.cos(r) <= 1e-10:
            raise DomainError(f"radius {r!r} too close to the equator (lambda' <= 1e-10)")
        return math.sin(r), math.cos(r)


class CriticalCatenoid(Catenoid):
    """Euclidean catenoid ``alpha (cosh t cos th, cosh t sin th, t)`` meeting the sphere of ``radius`` orthogonally."""

    model = "euclidean"
    space = EUCLIDEAN
    metric = np.ones(3)
    scan_limit = 5.0

    def __init__(self, radius: float = 1.0, config: NumericsConfig = DEFAULT_CONFIG):
        if not radius > 0:
            raise DomainError(f"ball radius must be positive, got {radius!r}")
        super().__init__(config)
        self.radius = float(radius)
        self.alpha = 1.0
        t0 = self.free_boundary[0]
        self.alpha = self.radius / math.hypot(math.cosh(t0), t0)
        self.__dict__.pop("free_boundary", None)

    def __repr__(self):
        return f"CriticalCatenoid(radius={self.radius!r})"

    @property
    def a(self) -> float:
        return self.radius

    def meridian_jet(self, s):
        al = self.alpha
        ch, sh = math.cosh(s), math.sinh(s)
        rad = (al * ch, al * sh, al * ch)
        tail = (np.array([al * s]), np.array([al]), np.array([0.0]))
        return rad, tail

    def unit_normal(self, F, Fs, Ft):
        n = np.cross(Fs, Ft)
        n = n / np.linalg.norm(n)
        if n[0] * F[0] + n[1] * F[1] > 0:
            n = -n
        return n

    def quadric_residual(self, F) -> float:
        return 0.0

    def geodesic_radius(self, F) -> float:
        return float(np.linalg.norm(F))

    def radial_unit(self, F, r):
        return F / r

    def space_lambda(self, r):
        return r, 1.0


@lru_cache(maxsize=64)
def make_catenoid(model: str, a: float | None = None, config: NumericsConfig = DEFAULT_CONFIG) -> Catenoid:
    if model == "hyperbolic":
        return CatenoidMinkowski(a, config)
    if model == "spherical":
        return CatenoidSpherical(a, config)
    if model == "euclidean":
        return CriticalCatenoid(1.0 if a is None else a, config)
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


# ---------------------------------------------------------------------------
# functional surface


def _integrand(model, a):
    if model == "hyperbolic":
        if not a > 0.5:
            raise DomainError(f"hyperbolic catenoid needs a > 1/2, got {a!r}")
        k = math.sqrt(a * a - 0.25)
        return lambda t: k / ((a * math.cosh(2 * t) + 0.5) * math.sqrt(a * math.cosh(2 * t) - 0.5))
    if model == "spherical":
        if not -0.5 < a < 0:
            raise DomainError(f"spherical catenoid needs -1/2 < a < 0, got {a!r}")
        k = math.sqrt(0.25 - a * a)

        def f(t):
            rad = 0.5 + a * math.cos(2 * t)
            if rad <= 0:
                raise DomainError("spherical phi integrand radicand is not positive")
            return k / ((0.5 - a * math.cos(2 * t)) * math.sqrt(rad))

        return f
    raise ValueError(f"phi is defined for the hyperbolic and spherical families, not {model!r}")


def phi_of_s(model: str, a: float, s: float, config: NumericsConfig = DEFAULT_CONFIG) -> float:
    """Angle function phi(s) by direct adaptive quadrature from 0."""
    f = _integrand(model, a)
    if s == 0:
        return 0.0
    val = quad_adaptive(f, 0.0, abs(s), config.quad_tol)
    return math.copysign(val, s)


def eval_F(model: str, a: float, s: float, theta: float, config: NumericsConfig = DEFAULT_CONFIG) -> np.ndarray:
    return make_catenoid(model, a, config).point(s, theta)


def surface_geometry(model: str, a: float, s: float, theta: float, fd_step: float = 1e-3,
                     config: NumericsConfig = DEFAULT_CONFIG) -> SurfaceSample:
    """Surface data with curvatures extracted by finite differences."""
    return make_catenoid(model, a, config).sample_fd(s, theta, fd_step)


def free_boundary_s0(model: str, a: float, config: NumericsConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    return make_catenoid(model, a, config).free_boundary


# ---------------------------------------------------------------------------
# Jacobi function of rotations fixing the center


def jacobi_u(sample: SurfaceSample, axes=(2, 3)) -> float:
    """``<F ^ e_i ^ e_j, N>`` for the rotation leaving the (e_i, e_j)-plane fixed."""
    F, N = sample.position, sample.normal
    metric = sample.metric
    w = cross4(F, E[axes[0]], E[axes[1]], metric)
    return float(np.sum(metric * w * N))


def _d1(u, h, axis):
    # fourth-order central first derivative along axis (interior only)
    return (np.roll(u, 2, axis) - 8 * np.roll(u, 1, axis) + 8 * np.roll(u, -1, axis) - np.roll(u, -2, axis)) / (12 * h)


def _d2(u, h, axis):
    return (-np.roll(u, 2, axis) + 16 * np.roll(u, 1, axis) - 30 * u + 16 * np.roll(u, -1, axis) - np.roll(u, -2, axis)) / (12 * h * h)


def jacobi_grid(cat: _QuadricCatenoid, n_s: int = 161, n_theta: int = 64, axes=(2, 3)):
    """u, |A|^2 and metric coefficients on a uniform (s, theta) grid over [-s0, s0] x [0, 2 pi)."""
    if n_s < 9 or n_theta < 8:
        raise ValueError("grid too coarse for the fourth-order Laplacian stencil")
    s0 = cat.s0
    ss = np.linspace(-s0, s0, n_s)
    th = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    u = np.empty((n_s, n_theta))
    A2 = np.empty(n_s)
    Eg = np.empty(n_s)
    Gg = np.empty(n_s)
    for i, s in enumerate(ss):
        for j, t in enumerate(th):
            smp = cat.sample(s, t)
            u[i, j] = jacobi_u(smp, axes)
            if j == 0:
                A2[i] = smp.norm_A_sq
                _, Fs, Ft, *_ = cat.jet(s, t)
                Eg[i], Gg[i] = cat.inner(Fs, Fs), cat.inner(Ft, Ft)
    return ss, th, u, A2, Eg, Gg


def jacobi_residuals(cat: _QuadricCatenoid, n_s: int = 161, n_theta: int = 64, axes=(2, 3)) -> tuple[float, float]:
    """Max interior residual of the Jacobi equation and max boundary Robin residual.

    Interior: ``Lap u + (|A|^2 + 2K) u`` with K the ambient curvature. Boundary:
    ``du/dnu - h_R u`` with ``h_R`` = coth R (hyperbolic) or cot R (spherical).
    """
    ss, th, u, A2, Eg, Gg = jacobi_grid(cat, n_s, n_theta, axes)
    hs, ht = ss[1] - ss[0], th[1] - th[0]
    K = cat.space.curvature_sign
    coef = np.sqrt(Gg / Eg)[:, None]
    us = _d1(u, hs, 0)
    flux_s = _d1(coef * us, hs, 0)
    lap = (flux_s / np.sqrt(Eg * Gg)[:, None]) + _d2(u, ht, 1) / Gg[:, None]
    resid = lap + (A2[:, None] + 2 * K) * u
    interior = float(np.max(np.abs(resid[4:-4])))

    R = cat.R
    h_R = 1 / math.tanh(R) if K == -1 else 1 / math.tan(R)
    # one-sided fourth-order derivative at s = s0; conormal is +d/ds there, -d/ds at -s0
    w = np.array([25, -48, 36, -16, 3]) / (12 * hs)
    du_top = w @ u[-1:-6:-1]
    du_bot = w @ u[:5]
    top = du_top / math.sqrt(Eg[-1]) - h_R * u[-1]
    bot = du_bot / math.sqrt(Eg[0]) - h_R * u[0]
    boundary = float(max(np.max(np.abs(top)), np.max(np.abs(bot))))
    return interior, boundary
