"""Shared numerical kernel.

Dormand-Prince 5(4) integration with cubic Hermite dense output and event
location, adaptive quadrature, bracketed root finding, Richardson-refined
central differences and closed-form 2x2 symmetric eigenvalues.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .spaceform import DomainError


class NumericalError(RuntimeError):
    pass


class StepLimitError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class BracketError(ValueError):
    pass


class IntegrationDomainError(NumericalError):
    """The right-hand side left its domain; ``t`` and ``state`` locate where."""

    def __init__(self, message: str, t: float, state):
        super().__init__(f"{message} (t={t!r}, state={np.asarray(state).tolist()})")
        self.t = t
        self.state = np.asarray(state, dtype=float)


@dataclass(frozen=True)
class NumericsConfig:
    ode_rel_tol: float = 1e-10
    ode_abs_tol: float = 1e-12
    quad_tol: float = 1e-12
    root_tol: float = 1e-12
    fd_step: float = 1e-5
    max_steps: int = 100_000

    def __post_init__(self):
        for name in ("ode_rel_tol", "ode_abs_tol", "quad_tol", "root_tol", "fd_step"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if not isinstance(self.max_steps, int) or self.max_steps < 1:
            raise ValueError(f"max_steps must be an integer >= 1, got {self.max_steps!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "NumericsConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            if key not in known:
                raise ValueError(f"unknown numerics option {key!r}")
            kwargs[key] = int(value) if key == "max_steps" else float(value)
        return cls(**kwargs)


DEFAULT_CONFIG = NumericsConfig()


# ---------------------------------------------------------------------------
# ODE integration

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _dp_step(rhs, t, y, k1, h):
    """One Dormand-Prince step. Returns (y_new, k_new, error_vector)."""
    ks = [k1]
    for i in range(1, 7):
        yi = y + h * sum(a * k for a, k in zip(_A[i], ks) if a != 0.0)
        ks.append(np.asarray(rhs(t + _C[i] * h, yi), dtype=float))
    y_new = y + h * sum(b * k for b, k in zip(_B5, ks) if b != 0.0)
    err = h * sum(e * k for e, k in zip(_E, ks))
    # FSAL: ks[6] was evaluated at (t + h, y_new)
    return y_new, ks[6], err


@dataclass
class Trajectory:
    """Accepted steps of an integration, with cubic Hermite interpolation between them."""

    t: np.ndarray
    y: np.ndarray
    yp: np.ndarray
    event_t: float | None = None
    event_y: np.ndarray | None = None
    n_steps: int = 0

    def __call__(self, tq):
        tq = np.asarray(tq, dtype=float)
        scalar = tq.ndim == 0
        tq = np.atleast_1d(tq)
        forward = self.t[-1] >= self.t[0]
        tt = self.t if forward else -self.t
        qq = tq if forward else -tq
        lo, hi = tt[0], tt[-1]
        if np.any(qq < lo - 1e-14 * max(1.0, abs(lo))) or np.any(qq > hi + 1e-14 * max(1.0, abs(hi))):
            raise ValueError("dense output requested outside the integrated interval")
        idx = np.clip(np.searchsorted(tt, qq, side="right") - 1, 0, len(tt) - 2)
        t0, t1 = self.t[idx], self.t[idx + 1]
        h = (t1 - t0)[:, None]
        s = ((tq - t0) / (t1 - t0))[:, None]
        y0, y1 = self.y[idx], self.y[idx + 1]
        d0, d1 = self.yp[idx], self.yp[idx + 1]
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        out = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
        return out[0] if scalar else out

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def y_end(self) -> np.ndarray:
        return self.y[-1]


def _initial_step(rhs, t0, y0, f0, direction, rtol, atol):
    # Hairer, Norsett & Wanner, Solving ODE I, II.4
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    try:
        f1 = np.asarray(rhs(t0 + direction * h0, y0 + direction * h0 * f0), dtype=float)
    except DomainError:
        return h0
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def integrate_ode(
    rhs: Callable,
    initial_state,
    t_span: tuple[float, float],
    event: Callable | None = None,
    config: NumericsConfig = DEFAULT_CONFIG,
    max_step: float = math.inf,
) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` over ``t_span``.

    If ``event(t, y)`` changes sign across an accepted step, its root is
    refined to ``config.root_tol`` by re-stepping from the start of that step
    and integration stops there. A ``DomainError`` raised by ``rhs`` rejects
    the trial step; if the step collapses an ``IntegrationDomainError`` is
    raised carrying the last accepted state.
    """
    t0, t1 = map(float, t_span)
    if not (math.isfinite(t0) and math.isfinite(t1)) or t0 == t1:
        raise ValueError(f"degenerate t_span {t_span!r}")
    direction = 1.0 if t1 > t0 else -1.0
    rtol, atol = config.ode_rel_tol, config.ode_abs_tol

    y = np.array(initial_state, dtype=float)
    t = t0
    try:
        k = np.asarray(rhs(t, y), dtype=float)
    except DomainError as exc:
        raise IntegrationDomainError(str(exc), t, y) from exc
    if not np.all(np.isfinite(k)):
        raise IntegrationDomainError("non-finite derivative at initial state", t, y)

    ts, ys, yps = [t], [y.copy()], [k.copy()]
    g_prev = event(t, y) if event is not None else None

    h = min(_initial_step(rhs, t, y, k, direction, rtol, atol), abs(t1 - t0), max_step)
    attempts = 0
    while direction * (t1 - t) > 0:
        attempts += 1
        if attempts > config.max_steps:
            raise StepLimitError(f"step limit {config.max_steps} reached at t={t!r}")
        h = min(h, abs(t1 - t), max_step)
        hmin = 16 * np.finfo(float).eps * max(1.0, abs(t))
        if h < hmin:
            raise IntegrationDomainError("step size collapsed", t, y)
        try:
            y_new, k_new, err = _dp_step(rhs, t, y, k, direction * h)
            ok = np.all(np.isfinite(y_new)) and np.all(np.isfinite(k_new))
        except DomainError:
            ok = False
        if not ok:
            h *= 0.25
            continue
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if err_norm > 1.0:
            h *= max(0.2, 0.9 * err_norm ** -0.2)
            continue

        t_new = t + direction * h
        if event is not None:
            g_new = event(t_new, y_new)
            if g_prev != 0.0 and g_prev * g_new <= 0.0:
                t_ev, y_ev = _locate_event(rhs, event, t, y, k, t_new, config.root_tol)
                k_ev = np.asarray(rhs(t_ev, y_ev), dtype=float)
                if t_ev != t:
                    ts.append(t_ev)
                    ys.append(y_ev)
                    yps.append(k_ev)
                return Trajectory(np.array(ts), np.array(ys), np.array(yps), t_ev, y_ev, attempts)
            g_prev = g_new

        t, y, k = t_new, y_new, k_new
        ts.append(t)
        ys.append(y.copy())
        yps.append(k.copy())
        h *= min(5.0, 0.9 * err_norm ** -0.2) if err_norm > 0 else 5.0

    return Trajectory(np.array(ts), np.array(ys), np.array(yps), None, None, attempts)


def _locate_event(rhs, event, t, y, k, t_new, root_tol):
    def g(tau):
        if tau == t:
            return event(t, y)
        y_tau, _, _ = _dp_step(rhs, t, y, k, tau - t)
        return event(tau, y_tau)

    lo, hi = (t, t_new) if t_new > t else (t_new, t)
    t_ev = find_root_bracketed(g, lo, hi, root_tol)
    y_ev = y if t_ev == t else _dp_step(rhs, t, y, k, t_ev - t)[0]
    return t_ev, y_ev


# ---------------------------------------------------------------------------
# quadrature, roots, differences, eigenvalues


def quad_adaptive(f: Callable[[float], float], a: float, b: float, quad_tol: float = 1e-12) -> float:
    """Adaptive Gauss-Kronrod quadrature with absolute error target ``quad_tol``."""
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=quad_tol, epsrel=0.0, limit=500, full_output=1)
    value, err_est = out[0], out[1]
    if not math.isfinite(value):
        raise QuadratureError(f"non-finite quadrature result on [{a}, {b}]")
    # round-off warnings are tolerated when the error estimate still meets the target
    if err_est > quad_tol:
        msg = out[3] if len(out) > 3 else ""
        raise QuadratureError(f"quadrature error estimate {err_est:.3e} > {quad_tol:.3e} on [{a}, {b}]: {msg}")
    return float(value)


@lru_cache(maxsize=8)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(f: Callable, a: float, b: float, n: int = 20) -> float:
    """Fixed-order Gauss-Legendre rule; ``f`` must accept arrays."""
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return float(half * np.dot(w, f(0.5 * (a + b) + half * x)))


def find_root_bracketed(f: Callable[[float], float], lo: float, hi: float, root_tol: float = 1e-12) -> float:
    """Brent's method on a sign-changing bracket."""
    flo, fhi = f(lo), f(hi)
    if math.isnan(flo) or math.isnan(fhi):
        raise NumericalError(f"NaN in bracket endpoints: f({lo})={flo}, f({hi})={fhi}")
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if flo * fhi > 0:
        raise BracketError(f"f does not change sign on [{lo}, {hi}] (f={flo}, {fhi})")

    def checked(x):
        v = f(x)
        if math.isnan(v):
            raise NumericalError(f"NaN encountered at x={x!r}")
        return v

    return float(optimize.brentq(checked, lo, hi, xtol=root_tol, rtol=4 * np.finfo(float).eps, maxiter=500))


def fd_derivative(f: Callable, x: float, order: int = 1, fd_step: float = 1e-5):
    """Central difference of order 1 or 2, Richardson-extrapolated over h and h/2."""
    if order == 1:
        def d(h):
            return (np.asarray(f(x + h)) - np.asarray(f(x - h))) / (2 * h)
    elif order == 2:
        fx = np.asarray(f(x))

        def d(h):
            return (np.asarray(f(x + h)) - 2 * fx + np.asarray(f(x - h))) / (h * h)
    else:
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    coarse, fine = d(fd_step), d(fd_step / 2)
    out = (4 * fine - coarse) / 3
    if np.any(np.isnan(out)):
        raise NumericalError(f"NaN in finite difference at x={x!r}")
    return out


def sym2_eigenvalues(m11: float, m12: float, m22: float) -> tuple[float, float]:
    """Ascending eigenvalues of [[m11, m12], [m12, m22]]."""
    if not all(math.isfinite(v) for v in (m11, m12, m22)):
        raise NumericalError(f"non-finite matrix entries ({m11}, {m12}, {m22})")
    mean = 0.5 * (m11 + m22)
    rad = math.hypot(0.5 * (m11 - m22), m12)
    return mean - rad, mean + rad
