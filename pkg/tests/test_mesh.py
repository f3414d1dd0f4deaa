import math

import numpy as np
import pytest

from spaceform_rigidity.domain import cap_from_angle
from spaceform_rigidity.errors import CoercivityError, ConfigurationError
from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.fields import make_case
from spaceform_rigidity.mesh import (
    BACKEND,
    Mesh,
    assemble,
    estimate_lambda1,
    generate_cap_domain,
    l2_error,
    mesh_hierarchy,
    read_mesh,
    solve,
    solve_mesh,
    write_mesh,
)
from spaceform_rigidity.mesh.fem import assemble_operators
from spaceform_rigidity.mesh.kernels import p1_triangles_numpy
from spaceform_rigidity.verify.suites import too_large_positive_domain


@pytest.fixture(scope="module")
def example_meshes():
    ex = horosphere_example(1.0 / 3.0)
    return ex, mesh_hierarchy(ex.domain, 5)


def test_refinement_quadruples_and_stays_valid(example_meshes):
    _, meshes = example_meshes
    counts = [len(m.simplices) for m in meshes]
    assert counts == [32 * 4**k for k in range(5)]
    for m in meshes:
        m.validate()
        assert np.all(m.areas() > 0)
        assert len(m.corner_vertices) == 2
    hs = [m.h() for m in meshes]
    assert all(h1 < h0 for h0, h1 in zip(hs, hs[1:]))


def test_boundary_vertices_on_their_surfaces(example_meshes):
    ex, meshes = example_meshes
    m = meshes[-1]
    np.testing.assert_allclose(ex.case.support.residual(m.vertices[m.T_vertices]), 0.0, atol=1e-10)
    np.testing.assert_allclose(ex.domain.sigma_residual(m.vertices[m.sigma_vertices]), 0.0, atol=1e-10)


def test_degenerate_input_rejected():
    v = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    m = Mesh(v, np.array([[0, 1, 2]]), np.zeros((0, 2), dtype=int), np.array([], dtype=str))
    with pytest.raises(ConfigurationError):
        m.validate()
    dom3 = cap_from_angle(make_case(4, 1.0, dim=3), 1.1, 0.3)
    with pytest.raises(ConfigurationError):
        generate_cap_domain(dom3)


def test_file_round_trip(example_meshes, tmp_path):
    ex, meshes = example_meshes
    path = tmp_path / "m.txt"
    write_mesh(meshes[2], path)
    back = read_mesh(path, ex.case, ex.domain)
    np.testing.assert_array_equal(back.vertices, meshes[2].vertices)
    np.testing.assert_array_equal(back.simplices, meshes[2].simplices)
    np.testing.assert_array_equal(back.facet_tags, meshes[2].facet_tags)
    bad = tmp_path / "bad.txt"
    bad.write_text("2 3 1 0\n0 0\n1 0\n")
    with pytest.raises(ConfigurationError):
        read_mesh(bad)


def test_hyperbolic_operator_is_spd(example_meshes):
    ex, meshes = example_meshes
    sys = assemble(meshes[2], ex.c_tilde)
    A = sys.matrix.toarray()
    np.testing.assert_allclose(A, A.T, atol=0)
    assert np.linalg.eigvalsh(A).min() > 0


def test_mass_is_a_conformal_volume(example_meshes):
    ex, meshes = example_meshes
    q = ex.domain.volume(4)
    vol = float(np.sum(q.weights * ex.case.model.conformal_factor(q.points) ** 2))
    errs = []
    for m in meshes:
        S, M, load = assemble_operators(m)
        assert M.sum() == pytest.approx(load.sum(), rel=1e-13)
        assert np.max(np.abs(S @ np.ones(len(m.vertices)))) < 1e-12
        errs.append(abs(M.sum() - vol))
    rates = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(rates) > 1.8


def test_cython_and_numpy_kernels_agree(example_meshes):
    from spaceform_rigidity.mesh import kernels

    _, meshes = example_meshes
    m = meshes[3]
    w = np.random.default_rng(1).uniform(0.5, 2.0, size=(len(m.simplices), 3))
    ref = p1_triangles_numpy(m.vertices, m.simplices.astype(np.int64), w, w**2)
    got = kernels.p1_triangles(m.vertices, m.simplices.astype(np.int64), w, w**2)
    for a, b in zip(ref, got):
        np.testing.assert_allclose(np.asarray(a), np.asarray(b), rtol=1e-13, atol=1e-15)
    assert BACKEND in ("cython", "numpy")


def test_zero_data_gives_zero_solution(example_meshes):
    ex, meshes = example_meshes
    sys = assemble(meshes[1], 0.0)
    zero = type(sys)(sys.mesh, sys.stiffness, sys.mass, sys.robin_mass, sys.load, sys.robin_load, 0.0, sys.free, sys.matrix, 0 * sys.rhs)
    assert np.all(solve(zero).nodal_values == 0.0)


def test_nonpositive_robin_constant_gives_nonpositive_solution():
    # max principle: Lap u - 2u = 1 with c~ <= 0 has u <= 0
    ex = horosphere_example(0.45)
    assert ex.c_tilde < 0
    m = mesh_hierarchy(ex.domain, 4)[-1]
    for ct in (ex.c_tilde, 0.0):
        assert solve_mesh(m, ct).nodal_values.max() <= 1e-10


def test_empty_dirichlet_set_rejected(example_meshes):
    _, meshes = example_meshes
    m = meshes[0]
    no_sigma = Mesh(m.vertices, m.simplices, m.boundary_facets, np.full(len(m.facet_tags), "T"), m.case, m.domain)
    with pytest.raises(ConfigurationError):
        assemble(no_sigma, 0.0)
    with pytest.raises(ConfigurationError):
        estimate_lambda1(no_sigma)


def test_solver_converges_at_second_order(example_meshes):
    ex, meshes = example_meshes
    errs = [l2_error(solve_mesh(m, ex.c_tilde), ex.u) for m in meshes[1:]]
    rates = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(rates) > 1.5


def test_lambda1_decreases_under_refinement():
    dom = cap_from_angle(make_case(4, 0.8), math.pi / 2, 0.3)
    lams = [estimate_lambda1(m) for m in mesh_hierarchy(dom, 4)[1:]]
    assert all(b < a for a, b in zip(lams, lams[1:]))
    assert lams[-1] > 2


def test_too_large_positive_domain_raises():
    m = mesh_hierarchy(too_large_positive_domain(), 3)[-1]
    assert estimate_lambda1(m) < 2
    with pytest.raises(CoercivityError, match="lambda_1"):
        solve_mesh(m, 0.0)


def test_environment_selects_the_numpy_fallback():
    import os
    import subprocess
    import sys

    env = {**os.environ, "SPACEFORM_KERNEL": "numpy"}
    out = subprocess.run(
        [sys.executable, "-c", "from spaceform_rigidity.mesh import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
