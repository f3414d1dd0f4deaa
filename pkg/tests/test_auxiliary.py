import numpy as np
import pytest

from spaceform_rigidity.diffops import directional_derivative
from spaceform_rigidity.auxiliary import hessian_residual, make_aux, robin_residual, solve_c0
from spaceform_rigidity.fields import make_case, sample_interior, sample_support
from spaceform_rigidity.verify.suites import C_TILDE_GRID, aux_suite, default_cases


def test_plane_case_closed_form_root():
    # c0 = c~ / (1 + sqrt(1 + c~^2)); c~ = 3/4 gives 1/3
    assert solve_c0(make_case(3), 0.75) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert solve_c0(make_case(3), 0.0) == 0.0


def test_equidistant_root():
    case = make_case(2, 0.3)
    assert solve_c0(case, 0.5) == pytest.approx(0.5 - 0.5 / np.cos(0.3))


@pytest.mark.parametrize("dim", [2, 3])
def test_resolvent_and_robin_residuals(dim, rng):
    for case in default_cases(dim):
        for rec in aux_suite(case, C_TILDE_GRID, rng, count=200):
            assert rec.passed, (case.label, rec.name, rec.inputs, rec.residual)


def test_robin_data_tracks_the_constant(rng):
    case = make_case(4, 1.0)
    s = sample_support(case, rng, 50)
    N = case.support.normal(s)
    for ct in (0.5, 0.7):
        aux = make_aux(case, ct)
        assert np.max(robin_residual(aux, s)) < 1e-10
        data = directional_derivative(aux.evaluator, s, N) - case.kappa * aux.evaluator.value(s)
        np.testing.assert_allclose(data, ct, atol=1e-10)
    p = sample_interior(case, rng, 50)
    assert np.max(hessian_residual(make_aux(case, 0.5), p)) < 1e-10


def test_empty_grid_is_rejected(rng):
    with pytest.raises(ValueError):
        aux_suite(make_case(3), [], rng)
