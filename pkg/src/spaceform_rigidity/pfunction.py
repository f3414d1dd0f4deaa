"""The P-function ``P_u = |grad u|^2 / 2 - u / (n+1) + K u^2 / 2``.

For ``Lap u + (n+1) K u = 1`` the Bochner formula gives

    Lap P_u = |Hess u - (Lap u / (n+1)) g|^2 >= 0,

so there are two independent ways to evaluate ``Lap P_u``: differentiate
``P_u`` directly (third-order jets of ``u``) or form the traceless Hessian.
Both are exposed so that they can be cross-checked.
"""
from __future__ import annotations

import numpy as np

from .diffops import ScalarField, covariant_hessian, laplace_beltrami, orthonormal
from .geometry import SpaceFormModel
from .jets import Jet


class PFunctionField:
    def __init__(self, u: ScalarField, K: int | None = None):
        self.u = u
        self.model: SpaceFormModel = u.model
        self.K = self.model.K if K is None else K
        self.d = self.model.dim

    def value(self, points) -> np.ndarray:
        p = self.model.check(np.atleast_2d(points))
        j = self.u.jet(p)
        w = self.model.conformal_factor(p)
        grad_sq = np.einsum("bi,bi->b", j.grad, j.grad) / w**2
        return 0.5 * grad_sq - j.val / self.d + 0.5 * self.K * j.val**2

    def jet(self, points) -> Jet:
        """Second-order jet of ``P_u`` built from a third-order jet of ``u``."""
        p = self.model.check(np.atleast_2d(points))
        xs = Jet.variables(p, order=3)
        uj = self.u.formula(xs)
        if not isinstance(uj, Jet):
            uj = Jet.constant(uj, xs[0])
        partials = [uj.partial(i) for i in range(self.d)]
        grad_sq = partials[0] * partials[0]
        for q in partials[1:]:
            grad_sq = grad_sq + q * q
        w = self.model.factor_components(xs)
        u2 = Jet(uj.val, uj.grad, uj.hess)
        return 0.5 * grad_sq / (w * w) - u2 / self.d + 0.5 * self.K * u2 * u2

    def laplacian(self, points) -> np.ndarray:
        """``Lap P_u`` by direct differentiation."""
        p = np.atleast_2d(points)
        return laplace_beltrami(self.model, self.jet(p), p)

    def bochner(self, points) -> np.ndarray:
        """``|Hess u - (Lap u/(n+1)) g|^2`` in an orthonormal frame."""
        p = np.atleast_2d(points)
        H = orthonormal(self.model, p, covariant_hessian(self.model, self.u, p))
        tr = np.trace(H, axis1=-2, axis2=-1)
        T = H - (tr / self.d)[:, None, None] * np.eye(self.d)
        return np.einsum("bij,bij->b", T, T)


def p_function(u: ScalarField, K: int | None = None) -> PFunctionField:
    return PFunctionField(u, K)
