import numpy as np

from spaceform_rigidity.diffops import ScalarField
from spaceform_rigidity.geometry import poincare_ball
from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.auxiliary import make_aux
from spaceform_rigidity.domain import sample_cap
from spaceform_rigidity.fields import make_case, sample_interior
from spaceform_rigidity.pfunction import p_function


def test_value_matches_definition(rng):
    ex = horosphere_example(0.2)
    p = sample_cap(ex.domain, rng, 50)
    j = ex.u.jet(p)
    w = ex.case.model.conformal_factor(p)
    expected = 0.5 * np.sum(j.grad**2, axis=1) / w**2 - j.val / 2 + 0.5 * (-1) * j.val**2
    np.testing.assert_allclose(p_function(ex.u).value(p), expected, rtol=1e-13, atol=1e-15)


def test_laplacian_equals_bochner_form_on_solutions(rng):
    ex = horosphere_example(1.0 / 3.0)
    P = p_function(ex.u)
    p = sample_cap(ex.domain, rng, 200)
    np.testing.assert_allclose(P.laplacian(p), P.bochner(p), atol=1e-10)


def test_aux_function_has_harmonic_p_function(rng):
    for cid, par in [(1, 1.0), (2, 0.3), (3, None), (4, 1.0)]:
        case = make_case(cid, par)
        P = p_function(make_aux(case, 0.5).evaluator)
        p = sample_interior(case, rng, 100)
        assert np.max(np.abs(P.laplacian(p))) < 1e-8


def test_bochner_form_sees_a_traceless_hessian(rng):
    # x_0 x_1 has a traceless flat Hessian, so the form is strictly positive
    f = ScalarField(poincare_ball(2), lambda xs: xs[0] * xs[1], "xy")
    p = rng.uniform(-0.3, 0.3, size=(100, 2))
    assert np.all(p_function(f).bochner(p) > 0.0)
