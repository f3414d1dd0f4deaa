import numpy as np
import pytest

from spaceform_rigidity.domain import sample_cap
from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.mesh import BvpSolution, mesh_hierarchy, solve_mesh
from spaceform_rigidity.mesh.field import FemField


@pytest.fixture(scope="module")
def example():
    ex = horosphere_example(1.0 / 3.0)
    return ex, mesh_hierarchy(ex.domain, 5)[-1]


def test_reproduces_quadratics_exactly(example):
    ex, m = example
    x, y = m.vertices[:, 0], m.vertices[:, 1]
    vals = 1.0 + 2 * x - y + 0.5 * x * x - 3 * x * y + y * y
    sol = BvpSolution(m, vals, -1, 1.0, 0.0, 0, 0.0, 1.0)
    f = FemField(sol)
    p = sample_cap(ex.domain, np.random.default_rng(3), 50)
    px, py = p[:, 0], p[:, 1]
    j = f.jet(p)
    np.testing.assert_allclose(j.val, 1 + 2 * px - py + 0.5 * px**2 - 3 * px * py + py**2, atol=1e-10)
    np.testing.assert_allclose(j.hess[:, 0, 1], -3.0, atol=1e-8)
    np.testing.assert_allclose(j.hess[:, 1, 1], 2.0, atol=1e-8)


def test_tracks_the_exact_solution(example, rng):
    ex, m = example
    f = FemField(solve_mesh(m, ex.c_tilde))
    p = sample_cap(ex.domain, rng, 200)
    np.testing.assert_allclose(f.value(p), ex.u.value(p), atol=1e-3)
    np.testing.assert_allclose(f.jet(p).grad, ex.u.jet(p).grad, atol=2e-2)


def test_locate_returns_a_containing_triangle(example, rng):
    ex, m = example
    f = FemField(BvpSolution(m, np.zeros(len(m.vertices)), -1, 1.0, 0.0, 0, 0.0, 1.0))
    p = sample_cap(ex.domain, rng, 100)
    tri, lam = f.locate(p)
    np.testing.assert_allclose(lam.sum(axis=1), 1.0)
    recon = np.einsum("bi,bid->bd", lam, m.vertices[m.simplices[tri]])
    np.testing.assert_allclose(recon, p, atol=1e-12)
