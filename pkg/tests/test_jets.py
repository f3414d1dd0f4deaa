import numpy as np

from spaceform_rigidity import jets as J
from spaceform_rigidity.jets import Jet


def _fd_hessian(f, p, h=1e-4):
    d = len(p)
    H = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            ei, ej = h * np.eye(d)[i], h * np.eye(d)[j]
            H[i, j] = (f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)) / (4 * h * h)
    return H


def test_product_and_quotient_rules():
    x, y = Jet.variables(np.array([[0.3, -0.7]]))
    f = x * x * y / (1.0 + x * y)
    X, Y = 0.3, -0.7
    g = lambda p: p[0] ** 2 * p[1] / (1 + p[0] * p[1])
    assert np.isclose(f.val[0], g(np.array([X, Y])))
    np.testing.assert_allclose(f.hess[0], _fd_hessian(g, np.array([X, Y])), atol=1e-6)


def test_elementary_functions_against_closed_forms():
    (x,) = Jet.variables(np.array([[0.4]]))
    for fn, d1, d2 in [
        (J.exp, np.exp, np.exp),
        (J.sin, np.cos, lambda t: -np.sin(t)),
        (J.cosh, np.sinh, np.cosh),
        (J.log, lambda t: 1 / t, lambda t: -1 / t**2),
        (J.sqrt, lambda t: 0.5 / np.sqrt(t), lambda t: -0.25 * t**-1.5),
    ]:
        j = fn(x)
        assert np.isclose(j.grad[0, 0], d1(0.4), rtol=1e-14)
        assert np.isclose(j.hess[0, 0, 0], d2(0.4), rtol=1e-14)


def test_third_order_partial():
    x, y = Jet.variables(np.array([[0.5, 2.0]]), order=3)
    f = x * x * x * y
    fx = f.partial(0)
    # d/dx (x^3 y) = 3 x^2 y with Hessian [[6y, 6x], [6x, 0]]
    assert np.isclose(fx.val[0], 3 * 0.25 * 2.0)
    np.testing.assert_allclose(fx.hess[0], [[12.0, 3.0], [3.0, 0.0]])


def test_arrays_do_not_hijack_jet_arithmetic():
    (x,) = Jet.variables(np.array([[1.0], [2.0]]))
    out = np.array([2.0, 3.0]) * x
    assert isinstance(out, Jet)
    np.testing.assert_allclose(out.val, [2.0, 6.0])
