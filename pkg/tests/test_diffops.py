import numpy as np
import pytest

from spaceform_rigidity import jets as J
from spaceform_rigidity.diffops import (
    ScalarField,
    covariant_gradient,
    fd_crosscheck,
    laplace_beltrami,
)
from spaceform_rigidity.geometry import poincare_ball, stereographic_sphere, upper_half_space


def _cosh_r_ball(dim):
    # cosh of the distance to the origin
    def f(xs):
        s = sum(x * x for x in xs)
        return (1 + s) / (1 - s)

    return ScalarField(poincare_ball(dim), f, "cosh_r")


def _cos_r_sphere(dim):
    def f(xs):
        s = sum(x * x for x in xs)
        return (1 - s) / (1 + s)

    return ScalarField(stereographic_sphere(dim), f, "cos_r")


@pytest.mark.parametrize("dim", [2, 3])
def test_laplacian_of_distance_potentials(dim, rng):
    p = rng.uniform(-0.4, 0.4, size=(200, dim))
    f = _cosh_r_ball(dim)
    np.testing.assert_allclose(laplace_beltrami(f.model, f, p), dim * f.value(p), rtol=1e-11)
    g = _cos_r_sphere(dim)
    q = rng.uniform(-2.0, 2.0, size=(200, dim))
    np.testing.assert_allclose(laplace_beltrami(g.model, g, q), -dim * g.value(q), rtol=1e-10, atol=1e-11)


def test_halfspace_height_log_is_harmonic_in_2d(rng):
    # log x_2 is a Busemann function with Laplacian -(n) = -1 in H^2
    f = ScalarField(upper_half_space(2), lambda xs: J.log(xs[1]) if isinstance(xs[1], J.Jet) else np.log(xs[1]))
    p = rng.uniform(0.2, 2.0, size=(100, 2))
    np.testing.assert_allclose(laplace_beltrami(f.model, f, p), -1.0, atol=1e-12)


def test_gradient_raises_index(rng):
    f = _cosh_r_ball(2)
    p = rng.uniform(-0.4, 0.4, size=(20, 2))
    w = f.model.conformal_factor(p)
    flat = f.jet(p).grad
    np.testing.assert_allclose(covariant_gradient(f.model, f, p), flat / w[:, None] ** 2, rtol=1e-13)


def test_fd_crosscheck_agrees(rng):
    f = _cosh_r_ball(3)
    rep = fd_crosscheck(f.model, f, rng.uniform(-0.3, 0.3, size=(10, 3)))
    assert rep.relative_deviation < 1e-5
