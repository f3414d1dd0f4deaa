import math

import numpy as np
import pytest

from spaceform_rigidity.domain import CapDomain, PerturbedCap2D, cap_from_angle, gauss_panels, sample_cap
from spaceform_rigidity.errors import ConfigurationError
from spaceform_rigidity.fields import make_case
from spaceform_rigidity.verify.boundary import contact_angle


def _lens_area(r1, r2, D):
    a1 = r1 * r1 * math.acos((D * D + r1 * r1 - r2 * r2) / (2 * D * r1))
    a2 = r2 * r2 * math.acos((D * D + r2 * r2 - r1 * r1) / (2 * D * r2))
    k = 0.5 * math.sqrt((-D + r1 + r2) * (D + r1 - r2) * (D - r1 + r2) * (D + r1 + r2))
    return a1 + a2 - k


def test_gauss_panels_integrate_polynomials():
    x, w = gauss_panels(0.0, 2.0, 2)[:2]
    assert np.sum(w * x**7) == pytest.approx(2.0**8 / 8, rel=1e-13)


@pytest.mark.parametrize("cid,param", [(1, 1.0), (4, 1.0)])
@pytest.mark.parametrize("theta", [math.pi / 2, 1.1, 2.0])
def test_flat_volume_of_lens(cid, param, theta):
    case = make_case(cid, param)
    dom = cap_from_angle(case, theta, 0.3)
    sh = case.support.shape
    D = float(np.linalg.norm(dom.C - sh.center))
    assert dom.volume(3).weights.sum() == pytest.approx(_lens_area(dom.rho, sh.radius, D), rel=1e-12)


@pytest.mark.parametrize("cid,param", [(1, 1.0), (2, 0.3), (3, None), (4, 1.0)])
def test_constructed_angle_is_measured(cid, param):
    case = make_case(cid, param)
    for theta in (math.pi / 2, 1.1, 2.0):
        dom = cap_from_angle(case, theta, 0.3)
        assert dom.theta == pytest.approx(theta, abs=1e-12)
        np.testing.assert_allclose(contact_angle(case.model, dom.gamma(1)), theta, atol=1e-10)


def test_sampling_regions(rng):
    dom = cap_from_angle(make_case(1, 1.0), 1.1, 0.3)
    inner = sample_cap(dom, rng, 200)
    assert np.all(dom.contains(inner))
    sig = sample_cap(dom, rng, 200, "sigma")
    np.testing.assert_allclose(dom.sigma_residual(sig), 0.0, atol=1e-12)
    t = sample_cap(dom, rng, 200, "T")
    np.testing.assert_allclose(dom.case.support.residual(t), 0.0, atol=1e-12)
    with pytest.raises(ConfigurationError):
        sample_cap(dom, rng, 10, "corner")


def test_invalid_caps_rejected():
    case = make_case(4, 1.0)
    with pytest.raises(ConfigurationError):
        cap_from_angle(case, 0.0, 0.3)
    with pytest.raises(ConfigurationError):
        CapDomain(case, np.array([5.0, 5.0]), 0.1)
    with pytest.raises(ConfigurationError):
        CapDomain(make_case(1, 1.0, dim=2), np.zeros(2), 0.1)


def test_bump_keeps_the_corner_angle():
    base = cap_from_angle(make_case(4, 1.0), 1.1, 0.3)
    bump = PerturbedCap2D(base, 0.15, "bump")
    np.testing.assert_allclose(contact_angle(base.model, bump.gamma(0)), 1.1, atol=1e-10)
    tilt = PerturbedCap2D(base, 0.15, "tilt")
    ang = contact_angle(base.model, tilt.gamma(0))
    assert np.ptp(ang) > 1e-2
