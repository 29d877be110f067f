import numpy as np
import pytest

from hcurv.curvature import CurvatureSpec
from hcurv.errors import NotISCError, RankError
from hcurv.immersion import (
    ParamImmersion,
    cap_immersion,
    codazzi_residual,
    dual_frame,
    frame_at,
    gauss_dual,
    graph_immersion,
    hessian_restriction_residual,
    k_curvature,
    k_laplacian,
    log_rule_residual,
    simons_residual,
)
from hcurv.minkowski import mink_inner, umbilic_cap


@pytest.fixture
def bowl():
    return graph_immersion(lambda x: 1 + 0.1 * x[..., 0] ** 2 + 0.2 * x[..., 1] ** 2, 2, np.array([-1.0, -1.0]), np.array([1.0, 1.0]))


@pytest.mark.parametrize("kappa", [0.2, 0.5, 0.8])
def test_caps_are_umbilic(kappa):
    e = cap_immersion(umbilic_cap(1.0, kappa))
    fr = frame_at(e, np.array([0.1, -0.2]))
    assert np.allclose(fr.lam, kappa, atol=1e-7)
    assert max(fr.consistency().values()) < 1e-6
    assert k_curvature(e, CurvatureSpec.power_sigma(2, 2), np.array([0.0, 0.1])) == pytest.approx(kappa, abs=1e-7)


def test_dual_swaps_forms_and_inverts_curvatures():
    e = cap_immersion(umbilic_cap(1.0, 0.5))
    u = np.array([0.2, 0.1])
    f, d = frame_at(e, u), dual_frame(e, u)
    assert np.allclose(d.I, f.III, atol=1e-6)
    assert np.allclose(d.III, f.I, atol=1e-6)
    assert np.allclose(np.sort(d.lam), np.sort(1 / f.lam), atol=1e-6)
    assert d.quadric == 1
    assert mink_inner(d.point, d.point) == pytest.approx(1.0, abs=1e-9)


def test_saddle_has_no_gauss_dual():
    saddle = graph_immersion(lambda x: 1 + 2 * x[..., 0] ** 2 - 2 * x[..., 1] ** 2, 2, np.array([-0.5, -0.5]), np.array([0.5, 0.5]))
    assert np.allclose(np.sort(frame_at(saddle, np.zeros(2)).lam), [-3.0, 5.0], atol=1e-6)
    with pytest.raises(NotISCError):
        gauss_dual(saddle, np.zeros(2))


def test_rank_error_on_degenerate_chart():
    def func(u):
        u = np.asarray(u, dtype=float)
        z = np.stack([u[..., 0] * 0, u[..., 0] * 0, np.ones_like(u[..., 0])], -1)
        return z

    e = ParamImmersion(func, 1, np.array([-1.0]), np.array([1.0]), quadric=-1)
    with pytest.raises(RankError):
        frame_at(e, np.array([0.0]))


def test_non_umbilic_graph_residuals_converge(bowl):
    u0 = np.array([0.3, -0.2])
    r = [simons_residual(bowl, u0, h) for h in (0.1, 0.05)]
    assert 3.2 <= r[0] / r[1] <= 4.8
    assert codazzi_residual(bowl, u0, 1e-2) <= 1e-4


def test_hessian_restriction_and_log_rule(bowl):
    u0 = np.array([0.1, 0.2])
    nu1 = np.array([0.0, 0.3, 0.0, 0.0])
    nu1 = nu1 / np.sqrt(mink_inner(nu1, nu1))
    assert hessian_restriction_residual(lambda x: mink_inner(x, nu1), bowl, u0) < 1e-6
    spec = CurvatureSpec.power_sigma(2, 2)
    phi = lambda u: 2.0 + u[..., 0] ** 2 + 0.5 * u[..., 1]  # noqa: E731
    assert log_rule_residual(bowl, spec, phi, u0) < 1e-5
    assert np.isfinite(k_laplacian(bowl, spec, phi, u0))
