import numpy as np
import pytest

from hcurv.curvature import CurvatureSpec
from hcurv.errors import DomainViolation, PreconditionError, SignatureError
from hcurv.immersion import cap_immersion
from hcurv.minkowski import mink_inner, umbilic_cap
from hcurv.pogorelov import (
    SampledSurface,
    barrier_hessian_check,
    canonical_barriers,
    dome_normal,
    euler_bound_check,
    make_barriers,
    phi_alpha,
    sup_quantity,
    uniform_bound_check,
)
from hcurv.minkowski import uhs_to_hyperboloid

NU0 = np.array([0.0, 0.0, 0.0, 1.0])


def _cap_surface(n, kappa=0.8):
    e = cap_immersion(umbilic_cap(1.0, kappa))
    return SampledSurface.from_immersion(e, -0.5, 0.5, n, spec=CurvatureSpec.power_sigma(2, 2), kappa=kappa)


@pytest.fixture(scope="module")
def caps():
    return [_cap_surface(n) for n in (9, 17, 33)]


def test_dome_normal_sign_and_norm():
    nu1 = dome_normal(np.array([0.2, -0.1]), 0.7)
    assert mink_inner(nu1, nu1) == pytest.approx(1.0)
    below = uhs_to_hyperboloid(np.array([0.2, -0.1, 0.3]))
    above = uhs_to_hyperboloid(np.array([0.2, -0.1, 1.2]))
    on = uhs_to_hyperboloid(np.array([0.2, -0.1, 0.7]))
    assert mink_inner(below, nu1) > 0 > mink_inner(above, nu1)
    assert mink_inner(on, nu1) == pytest.approx(0.0, abs=1e-12)


def test_make_barriers_validation():
    nu1 = dome_normal(np.zeros(2), 1.0)
    with pytest.raises(SignatureError):
        make_barriers(NU0, [0.0, 0.0, 1.0, 0.0], 0.1, 2 * nu1)
    with pytest.raises(ValueError):
        make_barriers(NU0, [0.0, 0.0, 1.0, 0.0], 0.0, nu1)
    pair = make_barriers(NU0, [0.0, 0.0, 1.0, 0.0], 0.1, nu1, B=4.0)
    assert pair.alpha == 5.0
    assert pair.hessian_check["ok"]
    assert barrier_hessian_check(pair, 2, samples=5, seed=1)["ok"]


def test_cap_samples_are_umbilic(caps):
    s = caps[-1]
    assert np.allclose(s.lam, 0.8, atol=1e-6)
    assert euler_bound_check(s)["ok"]


def test_canonical_barriers_and_phi(caps):
    s = caps[-1]
    pair = canonical_barriers(s)
    assert pair.alpha == max(2.0, pair.B) + 1.0
    pf = phi_alpha(s, pair)
    assert np.isfinite(pf.max_value)
    assert np.all(pf.fhat[pf.working] > 2 * pair.fhat.epsilon)
    q = sup_quantity(s, pair)
    assert q["sup"] == pytest.approx(np.exp(pf.max_value))


def test_phi_rejects_points_outside_working_set(caps):
    s = caps[-1]
    pair = canonical_barriers(s)
    with pytest.raises(DomainViolation):
        phi_alpha(s, pair, restrict=False)
    far = make_barriers(NU0, s.normals[0], 10.0, pair.f.nu1, verify=False)
    with pytest.raises(DomainViolation):
        phi_alpha(s, far)


def test_uniform_bound_and_blowup_control(caps):
    pair = canonical_barriers(caps[-1])
    rep = uniform_bound_check(caps, pair)
    assert rep["bounded"] and not rep["blowup"]
    h0 = caps[0].h
    control = uniform_bound_check([s.with_lam(s.lam * h0 / s.h) for s in caps], pair)
    assert control["blowup"]
    with pytest.raises(ValueError):
        uniform_bound_check(caps[:1], pair)


def test_euler_bound_needs_spec(caps):
    bare = caps[0]
    bare = SampledSurface(bare.chart, bare.points, bare.normals, bare.lam, bare.nbr, bare.h)
    with pytest.raises(PreconditionError):
        euler_bound_check(bare)
