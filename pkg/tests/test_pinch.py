import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbgap import spaceform
from fbgap.catenoid import make_catenoid
from fbgap.numerics import fd_derivative
from fbgap.pinch import (
    CertificationRefused,
    CertificationReport,
    catenoid_samples,
    certify_catenoid,
    certify_profile,
    conformal_curvatures,
    eq1_value,
    hessian_form,
    hessian_form_spherical,
    hessian_matrix,
    hessian_matrix_spherical,
    hessian_psd_report,
    min_hessian_eigenvalue,
    pinch_Q,
    profile_sample,
    profile_samples,
    spherical_identity_residual,
    strictly_decreasing,
)
from fbgap.spaceform import EUCLIDEAN, HYPERBOLIC, SPHERICAL, DomainError
from fbgap.surface import SurfaceSample


@given(st.floats(0.01, 0.99))
def test_eq1_is_one_at_neck(c):
    assert eq1_value(0.0, c, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_eq1_vanishes_at_boundary(profiles):
    for sol in profiles.values():
        t, f, fp, _ = sol.boundary
        assert abs(eq1_value(t, f, fp)) <= 1e-12


def test_eq1_factor_assembly(profiles):
    sol = profiles[0.5]
    i = int(np.argmin(np.abs(sol.t - sol.t_max / 2)))
    t, f, fp, fpp = sol.samples[i]
    _, k2 = conformal_curvatures(t, f, fp, fpp)
    zn = math.hypot(t, f)
    n_dr = (t * fp - f) / (math.sqrt(1 + fp * fp) * zn)
    tanh_r = 2 * zn / (1 + zn * zn)
    assert eq1_value(t, f, fp) == pytest.approx(k2 * (-n_dr) * tanh_r, abs=1e-10)


def test_Q_is_twice_eq1_squared(profiles):
    for sol in profiles.values():
        for t, f, fp, fpp in sol.samples[::20]:
            smp = profile_sample(t, f, fp, fpp)
            assert pinch_Q(smp) == pytest.approx(2 * eq1_value(t, f, fp) ** 2, abs=1e-12)


def test_neck_conformal_data():
    t, f, fp, fpp = 0.0, 0.5, 0.0, 14 / 3
    rho, grad = spaceform.conformal_factor([t, f, 0.0])
    assert rho == pytest.approx(8 / 3, abs=1e-15)
    w = math.sqrt(1 + fp * fp)
    assert 1 / (f * w) == 2.0
    n_bar = np.array([fp, -1.0, 0.0]) / w
    n_rho = float(n_bar @ grad)
    assert n_rho == pytest.approx(-rho**2 * f / w, abs=1e-14)
    fd = fd_derivative(lambda h: spaceform.conformal_factor(np.array([t, f, 0.0]) + h * n_bar)[0], 0.0)
    assert n_rho == pytest.approx(fd, abs=1e-8)
    k1, k2 = conformal_curvatures(t, f, fp, fpp)
    assert k2 == pytest.approx(2 / rho - n_rho / rho**2, abs=1e-14)
    assert k1 + k2 == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("center", [1.2, 1.5, 3.0])
def test_geodesic_plane_has_zero_curvature(center):
    # a Euclidean sphere orthogonal to the unit sphere is a totally geodesic plane
    radius = math.sqrt(center**2 - 1)
    for t in np.linspace(center - 0.9 * radius, center - radius + 1e-3, 7):
        if t * t >= 1:
            continue
        u = t - center
        f = math.sqrt(radius**2 - u * u)
        if t * t + f * f >= 1:
            continue
        k1, k2 = conformal_curvatures(t, f, -u / f, -(radius**2) / f**3)
        assert abs(k1) <= 1e-10 and abs(k2) <= 1e-10


def test_profile_minimality(profiles):
    for sol in profiles.values():
        for s in profile_samples(sol):
            assert abs(s.mean_curvature) <= 1e-8


def test_domain_errors():
    with pytest.raises(DomainError):
        conformal_curvatures(0.1, 0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        eq1_value(0.1, -0.1, 0.0)
    cat = make_catenoid("spherical", -0.25)
    smp = dataclasses.replace(cat.sample(0.1, 0.0), potential=0.0)
    with pytest.raises(DomainError):
        pinch_Q(smp)


def _disk_sample(space, r):
    # totally geodesic disk through the center: radial direction is tangent, A = 0
    return SurfaceSample(
        space=space, position=np.array([r, 0.0, 0.0]), normal=np.array([0.0, 0.0, 1.0]),
        k1=0.0, k2=0.0, r=r, support=0.0, potential=spaceform.lam_prime(space, r),
        frame=np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
        radial_tangent=np.array([1.0, 0.0]), metric=np.ones(3),
    )


@pytest.mark.parametrize("r", [0.1, 0.7, 2.0])
def test_disk_hessian(r):
    smp = _disk_sample(HYPERBOLIC, r)
    lam, dlam, ddlam = math.sinh(r), math.cosh(r), math.sinh(r)
    rng = np.random.default_rng(3)
    for _ in range(10):
        y, z = rng.normal(size=(2, 2))
        expect = 2 * lam * ddlam * y[0] * z[0] + 2 * dlam**2 * (y @ z)
        assert hessian_form(HYPERBOLIC, smp, y, z) == pytest.approx(expect, rel=1e-13)
        Y = np.array([y[0], y[1], 0.0])
        assert hessian_form(HYPERBOLIC, smp, Y, z) == pytest.approx(expect, rel=1e-13)
    assert min_hessian_eigenvalue(HYPERBOLIC, smp) >= 0


def test_non_tangent_vector_rejected():
    smp = _disk_sample(HYPERBOLIC, 0.5)
    with pytest.raises(ValueError):
        hessian_form(HYPERBOLIC, smp, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        hessian_form(HYPERBOLIC, smp, [1.0, 0.0, 0.0, 0.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        hessian_form_spherical(_disk_sample(SPHERICAL, 0.5), [0.0, 0.0, 1.0], [1.0, 0.0])


def test_eigenvalue_structure(profiles):
    sol = profiles[0.5]
    for smp in profile_samples(sol)[::25]:
        lam = math.sinh(smp.r)
        dlam = math.cosh(smp.r)
        H = hessian_matrix(HYPERBOLIC, smp) - 2 * lam * lam * np.outer(smp.radial_tangent, smp.radial_tangent)
        ev = np.linalg.eigvalsh(H)
        q = math.sqrt(pinch_Q(smp) / 2)
        np.testing.assert_allclose(ev, [2 * dlam**2 * (1 - q), 2 * dlam**2 * (1 + q)], rtol=1e-10, atol=1e-12)


def test_profile_hessian_psd(profiles):
    for sol in profiles.values():
        assert hessian_psd_report(HYPERBOLIC, profile_samples(sol)) >= -1e-9


@pytest.mark.parametrize("r", [math.pi / 6, 1.0])
def test_spherical_identity(r):
    assert abs(spherical_identity_residual(r)) <= 1e-12


@pytest.mark.parametrize("r", [0.0, math.pi / 2, 2.0, -0.1])
def test_spherical_identity_domain(r):
    with pytest.raises(DomainError):
        spherical_identity_residual(r)


def test_spherical_composed_hessian_radial_term_cancels():
    # in the radial-radial entry of the disk case the identity removes the lambda'' contribution
    r = 0.8
    smp = _disk_sample(SPHERICAL, r)
    H = hessian_matrix_spherical(smp)
    d1 = 0.5 / math.sqrt(1 - math.sin(r) ** 2)
    assert H[0, 0] == pytest.approx(d1 * 2 * math.cos(r) ** 2, rel=1e-12)
    assert H[1, 1] == pytest.approx(d1 * 2 * math.cos(r) ** 2, rel=1e-12)


def test_spherical_boundary_gradient_tangent(catenoids):
    for a in (-0.4, -0.25, -0.1):
        cat = catenoids[("spherical", a)]
        assert abs(cat.sample(cat.s0, 0.0).radial_normal) <= 1e-8


def test_certify_profile_report(profiles):
    for sol in profiles.values():
        rep = certify_profile(sol)
        assert rep.sup_q == pytest.approx(2.0, abs=1e-10)
        assert rep.argmax_t == 0.0
        assert abs(rep.boundary_q) <= 1e-8
        assert rep.monotone
        assert rep.passed
        assert all(rep.checks().values())


def test_report_json_round_trip(profiles):
    rep = certify_profile(profiles[0.5])
    doc = json.loads(rep.to_json())
    assert set(doc) == {
        "sup_q", "argmax_t", "boundary_q", "monotone", "min_hess_eig",
        "max_mean_curv_residual", "max_boundary_support_residual",
    }
    assert CertificationReport.from_json(rep.to_json()) == rep


def test_certification_refused_for_non_minimal(profiles):
    sol = profiles[0.5]
    bad = sol.samples.copy()
    bad[:, 3] *= 1.01
    with pytest.raises(CertificationRefused):
        certify_profile(dataclasses.replace(sol, samples=bad))
    with pytest.raises(CertificationRefused):
        certify_catenoid(make_catenoid("hyperbolic", 1.0), n_s=21, residual_gate=0.0)


@pytest.mark.parametrize("key", [("hyperbolic", 0.75), ("hyperbolic", 2.0), ("spherical", -0.4), ("spherical", -0.1)])
def test_certify_catenoid(catenoids, key):
    rep = certify_catenoid(catenoids[key], n_s=201, n_theta=4)
    assert rep.passed, rep.checks()


def test_catenoid_samples_include_neck():
    cat = make_catenoid("hyperbolic", 1.0)
    samples = catenoid_samples(cat, n_s=10, n_theta=2)
    assert len(samples) == 22
    assert any(s.param == (0.0, 0.0) for s in samples)


def test_strictly_decreasing():
    x = np.linspace(0, 1, 101)
    assert strictly_decreasing(x, 1 - x)
    assert not strictly_decreasing(x, x)
    y = 1 - x
    y[50] = y[49]
    assert not strictly_decreasing(x, y)


def test_euclidean_hessian_is_pointwise_psd(catenoids):
    cat = catenoids[("euclidean", 1.0)]
    assert hessian_psd_report(EUCLIDEAN, catenoid_samples(cat, n_s=51, n_theta=4)) >= -1e-9
