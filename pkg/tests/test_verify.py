import math

import numpy as np
import pytest

from spaceform_rigidity.errors import SpaceFormError
from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.fields import make_case
from spaceform_rigidity.verify.identities import check_integral_identity, sigma_wronskian_integral
from spaceform_rigidity.verify.suites import (
    cap_geometry_suite,
    default_cases,
    identity_suite,
    isometry_suite,
    negative_control_suite,
)


def test_isometry(rng):
    assert all(r.passed for r in isometry_suite(rng, count=300))
    assert all(r.passed for r in isometry_suite(rng, count=300, dim=3))


def test_identity_on_the_exact_example():
    for rec in identity_suite(0.1, levels=(1, 2, 3)):
        assert rec.passed, (rec.name, rec.inputs, rec.residual)


def test_wrong_robin_constant_breaks_the_wronskian():
    recs = identity_suite(0.1, levels=(2,), c_tilde_shift=0.3)
    wr = [r for r in recs if r.name == "identity.wronskian"][0]
    assert not wr.passed


@pytest.mark.parametrize("dim", [2, 3])
def test_minkowski_and_balance_on_umbilical_caps(dim):
    for case in default_cases(dim):
        for rec in cap_geometry_suite(case, level=3):
            assert rec.passed, (case.label, rec.name, rec.residual)


def test_perturbed_caps_fail_the_formulas():
    for case in default_cases(2):
        recs = negative_control_suite(case)
        assert all(r.passed for r in recs), [(r.name, r.residual) for r in recs]
        assert [r.negative for r in recs] == [True, True, False]


def test_identity_terms_scale_with_a():
    ex = horosphere_example(0.2)
    aux = ex.aux()
    r0 = check_integral_identity(ex.domain, ex.u, aux, ex.case.V, 0.0, 2)
    r5 = check_integral_identity(ex.domain, ex.u, aux, ex.case.V, 5.0, 2)
    assert abs(r0.lhs) < 1e-10 and abs(r5.lhs) < 1e-10
    assert abs(sigma_wronskian_integral(ex.domain, ex.u, aux, ex.case.V, 2)) < 1e-8


def test_identity_refuses_mismatched_support():
    ex = horosphere_example(0.2)
    other = make_case(4, 1.0)
    with pytest.raises(SpaceFormError):
        check_integral_identity(ex.domain, ex.u, ex.aux(), other.V, 0.0, 2)
