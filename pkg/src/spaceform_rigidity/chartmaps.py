"""Isometries between charts, written in coordinate components.

A :class:`ChartMap` stores its forward and inverse maps as functions of
coordinate components using only arithmetic, so the same code evaluates on
arrays and on jets.  Fields are transported by pull-back (scalars) and
push-forward (vectors).  All maps here are Mobius transformations, whose
Jacobians are conformal: ``J^{-1} = J^T / |J e_1|^2``.  That keeps the
push-forward Jet friendly without a matrix inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .diffops import ScalarField, VectorField
from .errors import ConfigurationError
from .geometry import SpaceFormModel, poincare_ball, sum_squares, upper_half_space
from .jets import Jet

Components = Callable[[Sequence], list]


@dataclass(frozen=True)
class ChartMap:
    source: SpaceFormModel
    target: SpaceFormModel
    forward: Components
    inverse: Components
    name: str = ""

    def __post_init__(self):
        if self.source.K != self.target.K or self.source.dim != self.target.dim:
            raise ConfigurationError("chart maps must preserve curvature and dimension")

    def __call__(self, points) -> np.ndarray:
        x = self.source.check(np.atleast_2d(points))
        return np.stack(self.forward([x[:, i] for i in range(x.shape[1])]), axis=-1)

    def pullback(self, points) -> np.ndarray:
        y = self.target.check(np.atleast_2d(points))
        return np.stack(self.inverse([y[:, i] for i in range(y.shape[1])]), axis=-1)

    def then(self, other: "ChartMap") -> "ChartMap":
        """``other`` after ``self``."""
        return ChartMap(
            self.source,
            other.target,
            lambda xs: other.forward(self.forward(xs)),
            lambda ys: self.inverse(other.inverse(ys)),
            f"{other.name}*{self.name}",
        )


def halfspace_to_ball_map(dim: int) -> ChartMap:
    def fwd(xs):
        den = sum_squares(list(xs[:-1]) + [xs[-1] + 1.0])
        out = [2.0 * c / den for c in xs[:-1]]
        out.append((sum_squares(xs) - 1.0) / den)
        return out

    def inv(ys):
        den = sum_squares(list(ys[:-1]) + [ys[-1] - 1.0])
        out = [2.0 * c / den for c in ys[:-1]]
        out.append((1.0 - sum_squares(ys)) / den)
        return out

    return ChartMap(upper_half_space(dim), poincare_ball(dim), fwd, inv, "halfspace->ball")


def dilation(model: SpaceFormModel, s: float) -> ChartMap:
    """``x -> s x`` (an isometry of the half-space chart)."""
    if s <= 0:
        raise ConfigurationError("dilation factor must be positive")
    return ChartMap(model, model, lambda xs: [s * c for c in xs], lambda ys: [c / s for c in ys], f"dil({s:g})")


def reflection(model: SpaceFormModel, axis: int) -> ChartMap:
    """Flip the sign of one coordinate (an isometry of the ball and sphere charts)."""

    def flip(xs):
        return [-c if i == axis else c for i, c in enumerate(xs)]

    return ChartMap(model, model, flip, flip, f"refl({axis})")


def transport_scalar(field: ScalarField, cmap: ChartMap) -> ScalarField:
    return ScalarField(cmap.target, lambda ys: field.formula(cmap.inverse(ys)), field.name)


def transport_vector(field: VectorField, cmap: ChartMap) -> VectorField:
    """Push-forward ``(F_* Z)(y) = DF(G(y)) Z(G(y))`` with ``G = F^{-1}``."""
    d = cmap.source.dim

    def formula(ys):
        if isinstance(ys[0], Jet):
            if ys[0].d3 is None:
                raise ValueError("transported vector fields need third-order jets")
            G = cmap.inverse(ys)
            dG = [[G[i].partial(a) for a in range(d)] for i in range(d)]
            at = [Jet(g.val, g.grad, g.hess) for g in G]
        else:
            yj = Jet.variables(np.stack(ys, axis=-1), order=2)
            G = cmap.inverse(yj)
            dG = [[G[i].grad[:, a] for a in range(d)] for i in range(d)]
            at = [g.val for g in G]
        Z = field.formula(at)
        lam2 = sum_squares([dG[i][0] for i in range(d)])
        return [sum_comps([dG[i][a] * Z[i] for i in range(d)]) / lam2 for a in range(d)]

    return VectorField(cmap.target, formula, field.name, jet_order=3)


def sum_comps(terms):
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total
