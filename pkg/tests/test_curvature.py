import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hcurv.curvature import (
    CurvatureSpec,
    DualCurvature,
    dual_spec,
    grad_K,
    hessian_quadratic_form,
    identity_suite,
    register_curvature,
    verify_properties,
)
from hcurv.errors import DomainError

positive = st.floats(min_value=1e-2, max_value=1e2, allow_nan=False)


def test_normalization_at_identity():
    for spec in (CurvatureSpec.power_sigma(1, 3), CurvatureSpec.power_sigma(3, 3), CurvatureSpec.quotient(3, 1, 3)):
        assert spec(np.ones(3)) == pytest.approx(1.0, abs=1e-14)


def test_gauss_curvature_m2():
    spec = CurvatureSpec.power_sigma(2, 2)
    assert spec([4.0, 1.0]) == pytest.approx(2.0, rel=1e-14)


@given(st.lists(positive, min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_matches_explicit_symmetric_sums(lam):
    for k, l in ((1, 0), (2, 0), (3, 0), (2, 1), (3, 2)):
        spec = CurvatureSpec.power_sigma(k, 3) if l == 0 else CurvatureSpec.quotient(k, l, 3)
        assert spec(lam) == pytest.approx(oracles.K_ref(lam, k, 3, l), rel=1e-12)


@given(st.lists(positive, min_size=3, max_size=3), st.floats(min_value=0.1, max_value=10))
@settings(max_examples=40, deadline=None)
def test_homogeneity_and_symmetry(lam, t):
    spec = CurvatureSpec.quotient(3, 1, 3)
    lam = np.array(lam)
    assert spec(t * lam) == pytest.approx(t * spec(lam), rel=1e-12)
    assert spec(lam[::-1]) == pytest.approx(spec(lam), rel=1e-14)


@given(st.lists(positive, min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_euler_identity_and_trace_bound(lam):
    b = grad_K(CurvatureSpec.power_sigma(2, 3), lam)
    assert np.dot(b.mu, b.lam) == pytest.approx(b.value, rel=1e-12)
    assert b.trace_mu >= 1.0 - 1e-12


def test_gradient_against_finite_differences():
    spec = CurvatureSpec.quotient(2, 1, 3)
    lam = np.array([3.0, 1.5, 0.4])
    b = grad_K(spec, lam)
    g = oracles.fd_gradient(lambda x: oracles.K_ref(x, 2, 3, 1), b.lam)
    assert np.allclose(b.mu, g, rtol=1e-8)


def test_quadratic_form_with_repeated_eigenvalues():
    spec = CurvatureSpec.power_sigma(2, 3)
    lam = np.array([1.0, 1.0, 2.0])
    M = np.array([[0.3, 0.5, -0.1], [0.5, -0.2, 0.4], [-0.1, 0.4, 0.7]])
    q = hessian_quadratic_form(spec, lam, M)
    fd = oracles.matrix_form_fd(lambda x: oracles.K_ref(x, 2, 3), lam, M)
    assert q == pytest.approx(fd, rel=1e-5, abs=1e-9)
    assert q <= 1e-12


def test_dual_curvature():
    spec = CurvatureSpec.power_sigma(2, 2)
    dual = dual_spec(spec)
    assert isinstance(dual, DualCurvature)
    lam = np.array([0.5, 0.5])
    assert dual(1 / lam) == pytest.approx(1 / spec(lam))
    K, mu, _ = dual.gradient([2.0, 3.0])
    assert np.dot(mu, [3.0, 2.0]) == pytest.approx(K)


def test_domain_errors():
    spec = CurvatureSpec.quotient(2, 1, 2)
    with pytest.raises(DomainError):
        spec([1.0, -0.1])
    with pytest.raises(DomainError):
        CurvatureSpec.power_sigma(2, 2)([1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        CurvatureSpec.power_sigma(4, 3)
    with pytest.raises(ValueError):
        CurvatureSpec.from_json({"kind": "power-sigma", "k": 1, "m": 2, "extra": 1})


def test_json_round_trip():
    spec = CurvatureSpec.quotient(3, 1, 4)
    assert CurvatureSpec.from_json(spec.to_json()) == spec


def test_property_and_identity_reports_pass():
    spec = CurvatureSpec.power_sigma(2, 3)
    assert verify_properties(spec, 300).ok
    rep = identity_suite(spec, 200)
    assert rep["euler_residual"] <= 1e-12
    assert rep["gradient_rel_err"] <= 1e-6
    assert rep["form_rel_err"] <= 1e-4
    assert rep["form_max_rel"] <= 1e-10


def test_register_rejects_non_concave():
    with pytest.raises(ValueError):
        register_curvature(lambda x: float(np.sqrt(np.mean(x**2))), 2)


def test_register_accepts_geometric_mean():
    K = register_curvature(lambda x: float(np.prod(x) ** (1 / len(x))), 3)
    assert K([2.0, 2.0, 2.0]) == pytest.approx(2.0)
