"""Truncated Taylor jets for forward-mode differentiation.

A :class:`Jet` carries the value, gradient and Hessian of a scalar function
(and optionally the third derivative tensor) at a batch of points.  One
forward pass through a formula built from ``+ - * /``, powers and the
elementary functions below yields all of them at once.

Shapes, for a batch of ``B`` points in ``d`` variables::

    val  (B,)      grad (B, d)      hess (B, d, d)      d3 (B, d, d, d)

Third derivatives are only propagated when every operand carries them
(``order=3`` at construction); they are used to evaluate the Laplacian of
quantities that already contain a gradient, such as the P-function.
"""
from __future__ import annotations

import numpy as np


def _sym3(a, b):
    """``a_i b_jk + a_j b_ik + a_k b_ij`` for a vector ``a`` and matrix ``b``."""
    t = a[..., :, None, None] * b[..., None, :, :]
    return t + np.swapaxes(t, -3, -2) + np.moveaxis(t, -3, -1)


class Jet:
    __slots__ = ("val", "grad", "hess", "d3")
    # make ndarray operands defer to the reflected Jet methods
    __array_ufunc__ = None

    def __init__(self, val, grad, hess, d3=None):
        self.val = val
        self.grad = grad
        self.hess = hess
        self.d3 = d3

    # -- construction -----------------------------------------------------
    @classmethod
    def variables(cls, points, order: int = 2) -> list["Jet"]:
        """Coordinate functions ``x_0, ..., x_{d-1}`` seeded at ``points``."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        batch, d = x.shape
        out = []
        for i in range(d):
            g = np.zeros((batch, d))
            g[:, i] = 1.0
            h = np.zeros((batch, d, d))
            t = np.zeros((batch, d, d, d)) if order >= 3 else None
            out.append(cls(x[:, i].copy(), g, h, t))
        return out

    @classmethod
    def constant(cls, value, like: "Jet") -> "Jet":
        val = np.broadcast_to(np.asarray(value, float), like.val.shape).copy()
        d3 = None if like.d3 is None else np.zeros_like(like.d3)
        return cls(val, np.zeros_like(like.grad), np.zeros_like(like.hess), d3)

    @property
    def order(self) -> int:
        return 3 if self.d3 is not None else 2

    @property
    def dim(self) -> int:
        return self.grad.shape[-1]

    def __repr__(self):
        return f"Jet(order={self.order}, batch={self.val.shape}, dim={self.dim})"

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return Jet(-self.val, -self.grad, -self.hess, None if self.d3 is None else -self.d3)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.val + other, self.grad, self.hess, self.d3)
        d3 = None if self.d3 is None or other.d3 is None else self.d3 + other.d3
        return Jet(self.val + other.val, self.grad + other.grad, self.hess + other.hess, d3)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other, float)
            d3 = None if self.d3 is None else self.d3 * c[..., None, None, None]
            return Jet(self.val * c, self.grad * c[..., None], self.hess * c[..., None, None], d3)
        f, g = self, other
        val = f.val * g.val
        grad = f.grad * g.val[..., None] + g.grad * f.val[..., None]
        outer = f.grad[..., :, None] * g.grad[..., None, :]
        hess = (
            f.hess * g.val[..., None, None]
            + g.hess * f.val[..., None, None]
            + outer
            + np.swapaxes(outer, -1, -2)
        )
        d3 = None
        if f.d3 is not None and g.d3 is not None:
            d3 = (
                f.d3 * g.val[..., None, None, None]
                + g.d3 * f.val[..., None, None, None]
                + _sym3(f.grad, g.hess)
                + _sym3(g.grad, f.hess)
            )
        return Jet(val, grad, hess, d3)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other, float))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return (self.log() * p).exp()
        p = float(p)
        if p == 2.0:
            return self * self
        if p == 1.0:
            return self
        v = self.val
        return self._compose(
            v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2), p * (p - 1) * (p - 2) * v ** (p - 3)
        )

    # -- elementary functions ----------------------------------------------
    def _compose(self, f0, f1, f2, f3):
        """Chain rule for ``phi(self)`` given ``phi, phi', phi'', phi'''`` at self.val."""
        g = self.grad
        outer = g[..., :, None] * g[..., None, :]
        grad = f1[..., None] * g
        hess = f1[..., None, None] * self.hess + f2[..., None, None] * outer
        d3 = None
        if self.d3 is not None:
            d3 = (
                f1[..., None, None, None] * self.d3
                + f2[..., None, None, None] * _sym3(g, self.hess)
                + f3[..., None, None, None] * (outer[..., :, :, None] * g[..., None, None, :])
            )
        return Jet(f0, grad, hess, d3)

    def reciprocal(self):
        v = self.val
        r = 1.0 / v
        return self._compose(r, -(r**2), 2.0 * r**3, -6.0 * r**4)

    def sqrt(self):
        s = np.sqrt(self.val)
        return self._compose(s, 0.5 / s, -0.25 / s**3, 0.375 / s**5)

    def exp(self):
        e = np.exp(self.val)
        return self._compose(e, e, e, e)

    def log(self):
        v = self.val
        return self._compose(np.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def sin(self):
        s, c = np.sin(self.val), np.cos(self.val)
        return self._compose(s, c, -s, -c)

    def cos(self):
        s, c = np.sin(self.val), np.cos(self.val)
        return self._compose(c, -s, -c, s)

    def sinh(self):
        s, c = np.sinh(self.val), np.cosh(self.val)
        return self._compose(s, c, s, c)

    def cosh(self):
        s, c = np.sinh(self.val), np.cosh(self.val)
        return self._compose(c, s, c, s)

    def arctan(self):
        v = self.val
        q = 1.0 / (1.0 + v * v)
        return self._compose(np.arctan(v), q, -2.0 * v * q**2, (6.0 * v * v - 2.0) * q**3)

    # -- slicing ------------------------------------------------------------
    def partial(self, i: int) -> "Jet":
        """Jet of the partial derivative ``d/dx_i`` (needs order 3, returns order 2)."""
        if self.d3 is None:
            raise ValueError("partial derivatives of a jet need third-order data")
        return Jet(self.grad[..., i], self.hess[..., i, :], self.d3[..., i, :, :])


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else np.sqrt(x)


def exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def log(x):
    return x.log() if isinstance(x, Jet) else np.log(x)


def cosh(x):
    return x.cosh() if isinstance(x, Jet) else np.cosh(x)


def sinh(x):
    return x.sinh() if isinstance(x, Jet) else np.sinh(x)


def sin(x):
    return x.sin() if isinstance(x, Jet) else np.sin(x)


def cos(x):
    return x.cos() if isinstance(x, Jet) else np.cos(x)


def value_of(x):
    """Underlying values of a jet, or the input itself."""
    return x.val if isinstance(x, Jet) else x
