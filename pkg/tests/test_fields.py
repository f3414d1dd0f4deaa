import math

import numpy as np
import pytest

from spaceform_rigidity.errors import ConfigurationError
from spaceform_rigidity.fields import CaseId, ball_horosphere_case, make_case, sample_interior, sample_support
from spaceform_rigidity.geometry import Chart
from spaceform_rigidity.verify.suites import default_cases, field_identity_suite


def test_principal_curvatures_of_the_supports():
    assert make_case(1, 0.7).kappa == pytest.approx(1.0 / math.tanh(0.7))
    assert make_case(2, 0.4).kappa == pytest.approx(math.cos(0.4))
    assert make_case(3).kappa == 0.0
    assert make_case(4, 0.9).kappa == pytest.approx(1.0 / math.tan(0.9))


@pytest.mark.parametrize("dim", [2, 3])
def test_field_identities_hold_in_every_case(dim, rng):
    for case in default_cases(dim):
        for rec in field_identity_suite(case, rng, count=200):
            assert rec.passed, (case.label, rec.name, rec.residual)


def test_case_parse_accepts_numbers_and_names():
    assert CaseId.parse(3) is CaseId.GEODESIC_PLANE_H
    assert CaseId.parse("4") is CaseId.GEODESIC_SPHERE_S
    assert CaseId.parse("equidistant_h") is CaseId.EQUIDISTANT_H


def test_missing_or_invalid_parameters():
    with pytest.raises(ConfigurationError):
        make_case(1)
    with pytest.raises(ConfigurationError):
        make_case(2, math.pi / 2)
    with pytest.raises(ConfigurationError):
        make_case(1, -1.0)
    with pytest.raises(ConfigurationError):
        make_case(3, chart="stereographic")


def test_case2_in_the_ball_chart(rng):
    case = make_case(2, 0.3, chart="ball")
    assert case.model.chart is Chart.POINCARE_BALL
    assert all(r.passed for r in field_identity_suite(case, rng, count=200))


def test_ball_horosphere_has_unit_curvature(rng):
    case = ball_horosphere_case(-0.2, 0.8)
    pts = sample_support(case, rng, 100)
    np.testing.assert_allclose(case.support.principal_curvature(pts), 1.0, atol=1e-10)
    with pytest.raises(ConfigurationError):
        ball_horosphere_case(0.0, 0.5)


def test_samples_lie_where_requested(rng):
    for case in default_cases(2):
        p = sample_interior(case, rng, 100)
        assert np.all(case.model.inside(p)) and np.all(case.support.residual(p) < 0)
        s = sample_support(case, rng, 100)
        np.testing.assert_allclose(case.support.residual(s), 0.0, atol=1e-12)
