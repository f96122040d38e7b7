import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import simpson
from fbgap.catenoid import (
    E,
    LORENTZ,
    cross4,
    eval_F,
    free_boundary_s0,
    jacobi_residuals,
    jacobi_u,
    lorentz_cross,
    lorentz_inner,
    make_catenoid,
    phi_of_s,
    surface_geometry,
)
from fbgap.pinch import pinch_Q
from fbgap.profile import solve_profile
from fbgap.spaceform import DomainError

HYP = (0.75, 1.0, 2.0)
SPH = (-0.4, -0.25, -0.1)

# composite Simpson, 10^6 panels, of the hyperbolic phi integrand with a = 1
SIMPSON_A1_S05 = 0.32678809570565676
SIMPSON_A1_S1 = 0.4451949661550624
# mpmath at 40 digits: F(a = 1, s = 0.3, theta = 1.2)
MP_F = [0.30000622834227224352, 0.77166150687857438972, 0.2926972336759703926, 1.3308406699691114114]


def _hyp_integrand(a):
    k = math.sqrt(a * a - 0.25)
    return lambda t: k / ((a * np.cosh(2 * t) + 0.5) * np.sqrt(a * np.cosh(2 * t) - 0.5))


def test_simpson_oracle_is_reproducible():
    assert simpson(_hyp_integrand(1.0), 0.0, 0.5, n=10**5) == pytest.approx(SIMPSON_A1_S05, abs=1e-12)


@pytest.mark.parametrize("model,a", [("hyperbolic", a) for a in HYP] + [("spherical", a) for a in SPH])
def test_phi_zero_and_odd(model, a):
    assert phi_of_s(model, a, 0.0) == 0.0
    cat = make_catenoid(model, a)
    assert cat.phi(0.0) == 0.0
    for s in (0.1, 0.37, 0.6):
        assert phi_of_s(model, a, -s) == pytest.approx(-phi_of_s(model, a, s), abs=1e-12)
        assert cat.phi(-s) == pytest.approx(-cat.phi(s), abs=1e-12)
        assert cat.phi(s) == pytest.approx(phi_of_s(model, a, s), abs=1e-12)


def test_phi_against_simpson():
    assert phi_of_s("hyperbolic", 1.0, 0.5) == pytest.approx(SIMPSON_A1_S05, abs=1e-9)
    assert phi_of_s("hyperbolic", 1.0, 1.0) == pytest.approx(SIMPSON_A1_S1, abs=1e-9)
    cat = make_catenoid("hyperbolic", 1.0)
    assert cat.phi(0.5) == pytest.approx(SIMPSON_A1_S05, abs=1e-9)


def test_phi_domain_errors():
    with pytest.raises(DomainError):
        phi_of_s("hyperbolic", 0.5, 0.1)
    with pytest.raises(DomainError):
        phi_of_s("spherical", 0.1, 0.1)
    with pytest.raises(ValueError):
        phi_of_s("euclidean", 1.0, 0.1)


@pytest.mark.parametrize("a", HYP)
def test_neck_point_hyperbolic(a):
    F = eval_F("hyperbolic", a, 0.0, 0.0)
    np.testing.assert_allclose(F, [math.sqrt(a - 0.5), 0, 0, math.sqrt(a + 0.5)], atol=1e-15)
    assert lorentz_inner(F, F) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("a", SPH)
def test_neck_point_spherical(a):
    F = eval_F("spherical", a, 0.0, 0.0)
    np.testing.assert_allclose(F, [math.sqrt(0.5 + a), 0, 0, math.sqrt(0.5 - a)], atol=1e-15)
    assert F @ F == pytest.approx(1.0, abs=1e-15)


def test_point_against_symbolic_oracle():
    F = eval_F("hyperbolic", 1.0, 0.3, 1.2)
    np.testing.assert_allclose(F, MP_F, rtol=0, atol=1e-14)


@pytest.mark.parametrize("model,a", [("hyperbolic", a) for a in HYP] + [("spherical", a) for a in SPH])
def test_quadric_and_unit_speed(model, a):
    cat = make_catenoid(model, a)
    ss = np.linspace(-cat.s0, cat.s0, 40)
    th = np.linspace(0, 2 * math.pi, 25, endpoint=False)
    for s in ss:
        for t in th:
            F, Fs, *_ = cat.jet(float(s), float(t))
            assert abs(cat.quadric_residual(F)) <= 1e-10
            assert cat.inner(Fs, Fs) == pytest.approx(1.0, abs=1e-8)


def test_lorentz_cross_basis():
    np.testing.assert_array_equal(lorentz_cross(E[0], E[1], E[2]), -E[3])


def test_lorentz_cross_identity_and_antisymmetry():
    rng = np.random.default_rng(7)
    for _ in range(100):
        v1, v2, v3, v = rng.normal(size=(4, 4))
        w = lorentz_cross(v1, v2, v3)
        assert lorentz_inner(w, v) == pytest.approx(np.linalg.det(np.array([v1, v2, v3, v])), abs=1e-10)
        np.testing.assert_allclose(lorentz_cross(v2, v1, v3), -w, atol=1e-12)
        np.testing.assert_allclose(lorentz_cross(v1, v3, v2), -w, atol=1e-12)


def test_cross_degenerate_is_zero():
    v = np.array([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(lorentz_cross(v, v, E[0]), np.zeros(4))


@given(st.lists(st.floats(-3, 3), min_size=16, max_size=16))
def test_cross4_euclidean_identity(xs):
    v1, v2, v3, v = np.reshape(xs, (4, 4))
    w = cross4(v1, v2, v3)
    assert float(w @ v) == pytest.approx(np.linalg.det(np.array([v1, v2, v3, v])), abs=1e-9)
    assert LORENTZ[3] == -1.0


@pytest.mark.parametrize("a", HYP)
def test_fd_mean_curvature(a):
    cat = make_catenoid("hyperbolic", a)
    rng = np.random.default_rng(int(a * 100))
    for s, t in zip(rng.uniform(-cat.s0, cat.s0, 200), rng.uniform(0, 2 * math.pi, 200)):
        smp = surface_geometry("hyperbolic", a, float(s), float(t))
        assert abs(smp.mean_curvature) <= 1e-5
        assert smp.k1 >= smp.k2


@pytest.mark.parametrize("a", HYP)
def test_fd_matches_analytic_curvature(a):
    cat = make_catenoid("hyperbolic", a)
    for s in (0.0, 0.3 * cat.s0, 0.9 * cat.s0):
        fd, exact = cat.sample_fd(s, 0.7), cat.sample(s, 0.7)
        assert fd.k1 == pytest.approx(exact.k1, abs=1e-5)
        assert fd.k2 == pytest.approx(exact.k2, abs=1e-5)


@pytest.mark.parametrize("key", [("hyperbolic", a) for a in HYP] + [("spherical", a) for a in SPH] + [("euclidean", 1.0)])
def test_neck_normal_and_traceless(catenoids, key):
    cat = catenoids[key]
    smp = cat.sample(0.0, 0.0)
    F, Fs, Ft, *_ = cat.jet(0.0, 0.0)
    assert abs(cat.inner(smp.normal, Fs)) <= 1e-10
    assert abs(cat.inner(smp.normal, Ft)) <= 1e-10
    assert smp.k1 == pytest.approx(-smp.k2, abs=1e-5)


@pytest.mark.parametrize("a", HYP)
def test_support_sign_convention(a):
    cat = make_catenoid("hyperbolic", a)
    for s in np.linspace(0, 0.95 * cat.s0, 12):
        assert cat.sample(float(s), 0.4).support < 0


@pytest.mark.parametrize("key", [("hyperbolic", a) for a in HYP] + [("spherical", a) for a in SPH] + [("euclidean", 1.0)])
def test_free_boundary_support_vanishes(catenoids, key):
    cat = catenoids[key]
    s0, R = cat.free_boundary
    assert s0 > 0 and R > cat.neck_radius
    assert abs(cat.boundary_function(s0)) <= 1e-10
    for t in (0.0, 1.0, 4.0):
        assert abs(cat.sample(s0, t).support) <= 1e-8
    # bracketing: the criterion has changed sign on the way to s0
    assert cat.boundary_function(0.5 * s0) * cat.boundary_function(1.01 * s0) < 0


def test_spherical_radius_below_hemisphere(catenoids):
    for a in SPH:
        assert catenoids[("spherical", a)].R < math.pi / 2


@pytest.mark.parametrize("a", HYP)
def test_cross_model_radius(a):
    r0 = math.acosh(math.sqrt(a + 0.5))
    c = math.tanh(r0 / 2)
    assert math.log((1 + c) / (1 - c)) == pytest.approx(r0, abs=1e-14)
    _, R_param = free_boundary_s0("hyperbolic", a)
    assert solve_profile(c).R == pytest.approx(R_param, abs=1e-6)


@pytest.mark.parametrize("model,a", [("hyperbolic", 1.0), ("spherical", -0.25)])
def test_jacobi_function_rotational(model, a):
    cat = make_catenoid(model, a)
    for s in np.linspace(-cat.s0, cat.s0, 21):
        for t in np.linspace(0, 2 * math.pi, 16, endpoint=False):
            assert abs(jacobi_u(cat.sample(float(s), float(t)))) <= 1e-8


def test_jacobi_other_axis_nonzero_but_solves_equation():
    cat = make_catenoid("hyperbolic", 1.0)
    u = jacobi_u(cat.sample(0.3, 0.4), axes=(1, 3))
    assert abs(u) > 1e-2
    interior, boundary = jacobi_residuals(cat, axes=(1, 3))
    assert interior <= 1e-4
    assert boundary <= 1e-4


def test_jacobi_grid_too_coarse():
    with pytest.raises(ValueError):
        jacobi_residuals(make_catenoid("hyperbolic", 1.0), n_s=5)


@pytest.mark.parametrize("a", SPH)
def test_spherical_pinching_holds(catenoids, a):
    cat = catenoids[("spherical", a)]
    qs = [pinch_Q(cat.sample(float(s), 0.0)) for s in np.linspace(-cat.s0, cat.s0, 201)]
    assert max(qs) <= 2 + 1e-8


def test_unknown_model():
    with pytest.raises(ValueError):
        make_catenoid("lorentzian", 1.0)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.6, 3.0), st.floats(-1.0, 1.0), st.floats(0, 2 * math.pi))
def test_random_hyperbolic_point_on_quadric(a, frac, t):
    cat = make_catenoid("hyperbolic", a)
    F = cat.point(frac * cat.s0, t)
    assert abs(lorentz_inner(F, F) + 1) <= 1e-10
    assert F[3] >= 1
