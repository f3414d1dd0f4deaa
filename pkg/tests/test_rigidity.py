import math

import numpy as np
import pytest

from spaceform_rigidity.errors import ConfigurationError, InconsistencyError
from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.mesh import BvpSolution, mesh_hierarchy, solve_mesh
from spaceform_rigidity.verify.rigidity import rigidity_check, sigma_flux, sigma_normal_derivative


@pytest.fixture(scope="module")
def solved():
    ex = horosphere_example(1.0 / 3.0)
    m = mesh_hierarchy(ex.domain, 5)[-1]
    return ex, solve_mesh(m, ex.c_tilde)


def test_overdetermined_condition_detected(solved):
    ex, sol = solved
    rep = rigidity_check(sol)
    assert rep.overdetermined
    assert rep.c_mean == pytest.approx(0.5, rel=1e-3)
    assert rep.inferred_principal_curvature == pytest.approx(1.0, rel=1e-3)
    assert rep.geometric_principal_curvature == pytest.approx(1.0, rel=1e-10)
    assert abs(rep.predicted_angle - ex.theta) < math.radians(0.5)
    assert all(r.passed for r in rep.records())


def test_flux_beats_the_facet_gradient(solved):
    _, sol = solved
    # the corner facets carry the largest flux error, so compare length-weighted means
    flux, dA = sigma_flux(sol)
    facet, _ = sigma_normal_derivative(sol)
    err = lambda q: abs(np.sum(q * dA) / np.sum(dA) - 0.5)
    assert err(flux) < 1e-3 < err(facet)


def test_non_umbilical_sigma_not_overdetermined():
    ex = horosphere_example(0.2)
    from spaceform_rigidity.domain import PerturbedCap2D

    dom = PerturbedCap2D(ex.domain, 0.15, "bump")
    m = mesh_hierarchy(dom, 4)[-1]
    rep = rigidity_check(solve_mesh(m, ex.c_tilde))
    assert not rep.overdetermined
    assert rep.message == "overdetermined condition not met"


def test_negative_flux_is_inconsistent(solved):
    _, sol = solved
    flipped = BvpSolution(sol.mesh, -sol.nodal_values, sol.K, sol.kappa, sol.c_tilde, 0, 0.0, 1.0)
    with pytest.raises(InconsistencyError):
        rigidity_check(flipped, method="facet")


def test_unknown_method(solved):
    with pytest.raises(ConfigurationError):
        rigidity_check(solved[1], method="spline")
