import math

import pytest

from spaceform_rigidity.errors import ConfigurationError
from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.verify.suites import example_suite


@pytest.mark.parametrize("b", [0.1, 1.0 / 3.0, 0.45])
def test_constants(b):
    ex = horosphere_example(b)
    assert ex.c == 0.5
    assert ex.c_tilde == pytest.approx((1 - 3 * b) / (2 * (1 - b)))
    assert math.cos(ex.theta) == pytest.approx(-ex.c_tilde / ex.c)
    assert ex.case.kappa == pytest.approx(1.0)


@pytest.mark.parametrize("b", [0.1, 1.0 / 3.0, 0.45])
def test_closed_form_satisfies_the_problem(b, rng):
    for rec in example_suite(b, rng, count=300):
        assert rec.passed, (rec.name, rec.residual)


def test_orthogonal_contact_at_one_third():
    assert horosphere_example(1.0 / 3.0).theta == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("b", [0.0, 0.5, -0.1])
def test_parameter_range(b):
    with pytest.raises(ConfigurationError):
        horosphere_example(b)
