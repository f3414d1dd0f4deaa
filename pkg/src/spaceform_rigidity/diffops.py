"""Covariant differential operators in conformally flat charts.

For ``g = w^2 delta`` with ``f = ln w`` the Christoffel symbols are

    Gamma^k_ij = delta_ik f_j + delta_jk f_i - delta_ij f_k,

evaluated from the closed-form chart derivatives of ``ln w`` (never by
differentiating ``w`` numerically).  Fields are differentiated with
:class:`~spaceform_rigidity.jets.Jet`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import SpaceFormModel
from .jets import Jet


class ScalarField:
    """Scalar function on a chart given by a formula in the coordinates.

    ``formula`` receives a list of coordinate components (arrays or jets)
    and must only use arithmetic and the functions of :mod:`.jets`.
    """

    def __init__(self, model: SpaceFormModel, formula: Callable[[Sequence], object], name: str = ""):
        self.model = model
        self.formula = formula
        self.name = name

    def __repr__(self):
        return f"ScalarField({self.name or self.formula.__name__!s})"

    def value(self, points) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        out = self.formula([x[:, i] for i in range(x.shape[1])])
        return np.broadcast_to(np.asarray(out, dtype=float), x.shape[:1]).copy()

    def jet(self, points, order: int = 2) -> Jet:
        xs = Jet.variables(points, order=order)
        out = self.formula(xs)
        if not isinstance(out, Jet):
            out = Jet.constant(out, xs[0])
        return out

    # small algebra so that u - phi, u + c etc. stay fields
    def _combine(self, other, op, name):
        if isinstance(other, ScalarField):
            return ScalarField(self.model, lambda xs: op(self.formula(xs), other.formula(xs)), name)
        return ScalarField(self.model, lambda xs: op(self.formula(xs), other), name)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, f"({self.name}+{getattr(other, 'name', other)})")

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, f"({self.name}-{getattr(other, 'name', other)})")

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, f"({self.name}*{getattr(other, 'name', other)})")

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.model, lambda xs: -self.formula(xs), f"-{self.name}")


class VectorField:
    """Vector field whose chart components are given by a formula."""

    def __init__(
        self, model: SpaceFormModel, formula: Callable[[Sequence], list], name: str = "", jet_order: int = 2
    ):
        self.model = model
        self.formula = formula
        self.name = name
        # transported fields differentiate the chart map inside the formula
        self.jet_order = jet_order

    def __repr__(self):
        return f"VectorField({self.name or self.formula.__name__!s})"

    def value(self, points) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        comps = self.formula([x[:, i] for i in range(x.shape[1])])
        return np.stack([np.broadcast_to(np.asarray(c, float), x.shape[:1]) for c in comps], axis=-1)

    def jet(self, points) -> "VectorFieldJet":
        xs = Jet.variables(points, order=self.jet_order)
        comps = [c if isinstance(c, Jet) else Jet.constant(c, xs[0]) for c in self.formula(xs)]
        return VectorFieldJet(
            value=np.stack([c.val for c in comps], axis=-1),
            jacobian=np.stack([c.grad for c in comps], axis=-2),
        )


@dataclass(frozen=True)
class VectorFieldJet:
    """Value ``Z^a`` and flat Jacobian ``jacobian[..., a, i] = d_i Z^a``."""

    value: np.ndarray
    jacobian: np.ndarray


def zero_vector_field(model: SpaceFormModel) -> VectorField:
    return VectorField(model, lambda xs: [0.0 * xs[0] for _ in xs], "0")


def _scalar_jet(f, points, order=2) -> Jet:
    if isinstance(f, Jet):
        return f
    return f.jet(points, order=order)


def _vector_jet(Z, points) -> VectorFieldJet:
    if isinstance(Z, VectorFieldJet):
        return Z
    return Z.jet(points)


def christoffel(model: SpaceFormModel, points) -> np.ndarray:
    """``Gamma[..., k, i, j]`` of the conformal metric."""
    df = model.log_factor_gradient(np.atleast_2d(points))
    eye = np.eye(model.dim)
    # delta_ik f_j + delta_jk f_i - delta_ij f_k
    return (
        eye[None, :, :, None] * df[:, None, None, :]
        + eye[None, :, None, :] * df[:, None, :, None]
        - eye[None, None, :, :] * df[:, :, None, None]
    )


def covariant_gradient(model: SpaceFormModel, f, points) -> np.ndarray:
    """Chart components of the Riemannian gradient, ``w^-2 * flat gradient``."""
    p = np.atleast_2d(points)
    w = model.conformal_factor(p)
    return _scalar_jet(f, p).grad / (w**2)[:, None]


def covariant_hessian(model: SpaceFormModel, f, points) -> np.ndarray:
    """Lower-index components ``d_i d_j f - Gamma^k_ij d_k f``."""
    p = np.atleast_2d(points)
    model.check(p)
    jet = _scalar_jet(f, p)
    gamma = christoffel(model, p)
    return jet.hess - np.einsum("bkij,bk->bij", gamma, jet.grad)


def laplace_beltrami(model: SpaceFormModel, f, points) -> np.ndarray:
    """g-trace of :func:`covariant_hessian`."""
    p = np.atleast_2d(points)
    w = model.conformal_factor(p)
    return np.trace(covariant_hessian(model, f, p), axis1=-2, axis2=-1) / w**2


def covariant_derivative(model: SpaceFormModel, Z, points) -> np.ndarray:
    """``(nabla Z)[..., a, i] = d_i Z^a + Gamma^a_ik Z^k``."""
    p = np.atleast_2d(points)
    model.check(p)
    zj = _vector_jet(Z, p)
    gamma = christoffel(model, p)
    return zj.jacobian + np.einsum("baik,bk->bai", gamma, zj.value)


def lie_derivative_metric(model: SpaceFormModel, Z, points) -> np.ndarray:
    """``(L_Z g)_ij = g_aj (nabla Z)^a_i + g_ai (nabla Z)^a_j``."""
    p = np.atleast_2d(points)
    w2 = model.conformal_factor(p) ** 2
    nz = covariant_derivative(model, Z, p)
    lowered = w2[:, None, None] * nz  # [b, j, i] = g_ja (nabla Z)^a_i
    return lowered + np.swapaxes(lowered, -1, -2)


def covariant_divergence(model: SpaceFormModel, Z, points) -> np.ndarray:
    return np.trace(covariant_derivative(model, Z, points), axis1=-2, axis2=-1)


def orthonormal(model: SpaceFormModel, points, tensor) -> np.ndarray:
    """Components of a (0,2)-tensor in the orthonormal frame ``E_i / w``."""
    w = model.conformal_factor(np.atleast_2d(points))
    return np.asarray(tensor) / (w**2)[:, None, None]


def directional_derivative(f, points, direction) -> np.ndarray:
    """``direction^i d_i f`` for chart vectors ``direction``."""
    jet = _scalar_jet(f, np.atleast_2d(points))
    return np.einsum("bi,bi->b", jet.grad, np.atleast_2d(direction))


@dataclass(frozen=True)
class FDReport:
    h: float
    gradient_deviation: float
    hessian_deviation: float
    scale: float

    @property
    def max_deviation(self) -> float:
        return max(self.gradient_deviation, self.hessian_deviation)

    @property
    def relative_deviation(self) -> float:
        return self.max_deviation / max(1.0, self.scale)


def fd_crosscheck(model: SpaceFormModel, f: ScalarField, points, h: float = 1e-4) -> FDReport:
    """Compare jet derivatives with second-order centred differences of values.

    Points must sit at least ``2 h`` inside the chart.
    """
    p = model.check(np.atleast_2d(points))
    d = p.shape[1]
    jet = f.jet(p)
    eye = np.eye(d)
    fd_grad = np.empty_like(jet.grad)
    fd_hess = np.empty_like(jet.hess)
    f0 = f.value(p)
    for i in range(d):
        ei = h * eye[i]
        fp, fm = f.value(p + ei), f.value(p - ei)
        fd_grad[:, i] = (fp - fm) / (2 * h)
        fd_hess[:, i, i] = (fp - 2 * f0 + fm) / h**2
        for j in range(i + 1, d):
            ej = h * eye[j]
            mixed = (
                f.value(p + ei + ej) - f.value(p + ei - ej) - f.value(p - ei + ej) + f.value(p - ei - ej)
            ) / (4 * h * h)
            fd_hess[:, i, j] = fd_hess[:, j, i] = mixed
    scale = float(max(np.max(np.abs(jet.grad)), np.max(np.abs(jet.hess)), np.max(np.abs(f0))))
    return FDReport(
        h=h,
        gradient_deviation=float(np.max(np.abs(fd_grad - jet.grad))),
        hessian_deviation=float(np.max(np.abs(fd_hess - jet.hess))),
        scale=scale,
    )
