"""Conformal charts of the hyperbolic space and the round sphere.

All three charts are conformally flat, ``g = w(x)**2 * delta``:

* Poincare ball (K = -1):       w = 2 / (1 - |x|^2)
* upper half-space (K = -1):    w = 1 / x_{n+1}
* stereographic chart (K = +1): w = 2 / (1 + |x|^2)

Points are NumPy arrays whose last axis holds the chart coordinates, so
every function here is vectorised over leading axes.  The ``*_components``
helpers take a sequence of coordinate components instead; those only use
``+ - * /`` and therefore also accept :class:`~spaceform_rigidity.jets.Jet`
objects, which is how the closed-form fields get their derivatives.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError

#: points closer than this to the ideal boundary of a chart are rejected
BOUNDARY_MARGIN = 1e-12


class Chart(enum.Enum):
    POINCARE_BALL = "ball"
    UPPER_HALF_SPACE = "halfspace"
    STEREOGRAPHIC = "stereographic"


_CHART_CURVATURE = {
    Chart.POINCARE_BALL: -1,
    Chart.UPPER_HALF_SPACE: -1,
    Chart.STEREOGRAPHIC: 1,
}


@dataclass(frozen=True)
class SpaceFormModel:
    """Ambient space form together with the chart used to describe it."""

    K: int
    chart: Chart
    dim: int

    def __post_init__(self):
        if self.K not in (-1, 1):
            raise ConfigurationError(f"unsupported curvature K={self.K!r}; only K = -1, +1")
        if not isinstance(self.chart, Chart):
            raise ConfigurationError(f"unknown chart {self.chart!r}")
        if _CHART_CURVATURE[self.chart] != self.K:
            raise ConfigurationError(f"chart {self.chart.value} requires K={_CHART_CURVATURE[self.chart]}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ConfigurationError(f"ambient dimension must be an integer >= 2, got {self.dim!r}")

    @property
    def n(self) -> int:
        """Dimension of hypersurfaces (``n``, one less than the ambient dimension)."""
        return self.dim - 1

    def check(self, points) -> np.ndarray:
        """Return ``points`` as a float array, raising if any lies outside the chart."""
        x = np.asarray(points, dtype=float)
        if x.shape[-1] != self.dim:
            raise ConfigurationError(f"expected {self.dim} coordinates, got {x.shape[-1]}")
        if not np.all(np.isfinite(x)):
            raise DomainError("non-finite chart coordinates")
        if self.chart is Chart.POINCARE_BALL:
            bad = np.linalg.norm(x, axis=-1) >= 1.0 - BOUNDARY_MARGIN
        elif self.chart is Chart.UPPER_HALF_SPACE:
            bad = x[..., -1] <= BOUNDARY_MARGIN
        else:
            bad = np.zeros(x.shape[:-1], dtype=bool)
        if np.any(bad):
            raise DomainError(f"{int(np.count_nonzero(bad))} point(s) outside the {self.chart.value} chart")
        return x

    def inside(self, points, margin: float = 0.0) -> np.ndarray:
        """Boolean mask of points at least ``margin`` away from the ideal boundary."""
        x = np.asarray(points, dtype=float)
        if self.chart is Chart.POINCARE_BALL:
            return np.linalg.norm(x, axis=-1) < 1.0 - max(margin, BOUNDARY_MARGIN)
        if self.chart is Chart.UPPER_HALF_SPACE:
            return x[..., -1] > max(margin, BOUNDARY_MARGIN)
        return np.all(np.isfinite(x), axis=-1)

    # -- conformal factor -------------------------------------------------
    def factor_components(self, xs: Sequence):
        """w as an expression in the coordinate components (Jet friendly)."""
        if self.chart is Chart.UPPER_HALF_SPACE:
            return 1.0 / xs[-1]
        sq = sum_squares(xs)
        if self.chart is Chart.POINCARE_BALL:
            return 2.0 / (1.0 - sq)
        return 2.0 / (1.0 + sq)

    def conformal_factor(self, points) -> np.ndarray:
        x = self.check(points)
        return self._factor(x)

    def _factor(self, x: np.ndarray) -> np.ndarray:
        if self.chart is Chart.UPPER_HALF_SPACE:
            return 1.0 / x[..., -1]
        sq = np.einsum("...i,...i->...", x, x)
        if self.chart is Chart.POINCARE_BALL:
            return 2.0 / (1.0 - sq)
        return 2.0 / (1.0 + sq)

    def log_factor_gradient(self, points) -> np.ndarray:
        """Flat gradient of ``ln w``; feeds the Christoffel symbols."""
        x = self.check(points)
        if self.chart is Chart.UPPER_HALF_SPACE:
            g = np.zeros_like(x)
            g[..., -1] = -1.0 / x[..., -1]
            return g
        sq = np.einsum("...i,...i->...", x, x)[..., None]
        if self.chart is Chart.POINCARE_BALL:
            return 2.0 * x / (1.0 - sq)
        return -2.0 * x / (1.0 + sq)

    def log_factor_hessian(self, points) -> np.ndarray:
        """Flat Hessian of ``ln w`` (used by the curvature of chart hypersurfaces)."""
        x = self.check(points)
        d = self.dim
        eye = np.eye(d)
        if self.chart is Chart.UPPER_HALF_SPACE:
            h = np.zeros(x.shape + (d,))
            h[..., -1, -1] = 1.0 / x[..., -1] ** 2
            return h
        sq = np.einsum("...i,...i->...", x, x)[..., None, None]
        outer = x[..., :, None] * x[..., None, :]
        if self.chart is Chart.POINCARE_BALL:
            return 2.0 * eye / (1.0 - sq) + 4.0 * outer / (1.0 - sq) ** 2
        return -2.0 * eye / (1.0 + sq) + 4.0 * outer / (1.0 + sq) ** 2

    def metric(self, points) -> np.ndarray:
        """Chart components of g at each point, shape ``(..., d, d)``."""
        w = self.conformal_factor(points)
        return (w**2)[..., None, None] * np.eye(self.dim)


def poincare_ball(dim: int = 2) -> SpaceFormModel:
    return SpaceFormModel(-1, Chart.POINCARE_BALL, dim)


def upper_half_space(dim: int = 2) -> SpaceFormModel:
    return SpaceFormModel(-1, Chart.UPPER_HALF_SPACE, dim)


def stereographic_sphere(dim: int = 2) -> SpaceFormModel:
    return SpaceFormModel(1, Chart.STEREOGRAPHIC, dim)


def sum_squares(xs: Sequence):
    total = xs[0] * xs[0]
    for c in xs[1:]:
        total = total + c * c
    return total


def conformal_factor(model: SpaceFormModel, p) -> np.ndarray:
    return model.conformal_factor(p)


def metric_inner(model: SpaceFormModel, p, v, u) -> np.ndarray:
    """``g_p(v, u) = w(p)^2 <v, u>`` for flat chart vectors ``v``, ``u``."""
    w = model.conformal_factor(p)
    return w**2 * np.einsum("...i,...i->...", np.asarray(v, float), np.asarray(u, float))


def metric_norm(model: SpaceFormModel, p, v) -> np.ndarray:
    return np.sqrt(metric_inner(model, p, v, v))


def geodesic_distance(model: SpaceFormModel, x, y) -> np.ndarray:
    """Riemannian distance between chart points.

    The half-angle forms below avoid the cancellation of ``arccosh`` near
    zero distance:

    * ball:        d = 2 asinh(|x-y| / sqrt((1-|x|^2)(1-|y|^2)))
    * half-space:  d = 2 asinh(|x-y| / (2 sqrt(x_d y_d)))
    * sphere:      d = 2 atan2(|x-y|, sqrt((1+|x|^2)(1+|y|^2) - |x-y|^2))

    The sphere case is the chord formula after lifting both points to the
    unit sphere.
    """
    x = model.check(x)
    y = model.check(y)
    diff = np.linalg.norm(x - y, axis=-1)
    if model.chart is Chart.POINCARE_BALL:
        sx = 1.0 - np.einsum("...i,...i->...", x, x)
        sy = 1.0 - np.einsum("...i,...i->...", y, y)
        return 2.0 * np.arcsinh(diff / np.sqrt(sx * sy))
    if model.chart is Chart.UPPER_HALF_SPACE:
        return 2.0 * np.arcsinh(diff / (2.0 * np.sqrt(x[..., -1] * y[..., -1])))
    px = 1.0 + np.einsum("...i,...i->...", x, x)
    py = 1.0 + np.einsum("...i,...i->...", y, y)
    return 2.0 * np.arctan2(diff, np.sqrt(np.maximum(px * py - diff**2, 0.0)))


def distance_profile_components(model: SpaceFormModel, base: Sequence[float], xs: Sequence):
    """``psi_dot(d(base, x))`` as a rational expression in the components of x.

    This is ``cosh d`` for K = -1 and ``cos d`` for K = +1.  Only arithmetic
    is used, so ``xs`` may be arrays or jets.
    """
    b = [float(v) for v in base]
    diff_sq = sum_squares([xi - bi for xi, bi in zip(xs, b)])
    if model.chart is Chart.POINCARE_BALL:
        sb = 1.0 - sum(v * v for v in b)
        return 1.0 + 2.0 * diff_sq / ((1.0 - sum_squares(xs)) * sb)
    if model.chart is Chart.UPPER_HALF_SPACE:
        return 1.0 + diff_sq / (2.0 * b[-1] * xs[-1])
    sb = 1.0 + sum(v * v for v in b)
    return 1.0 - 2.0 * diff_sq / ((1.0 + sum_squares(xs)) * sb)


def cosh_or_cos_distance_from(base, p, model: SpaceFormModel) -> np.ndarray:
    """Closed chart form of ``psi_dot(d(base, p))``.

    With ``base`` at the ball origin this is ``(1+|x|^2)/(1-|x|^2)``; in the
    stereographic chart it is ``(1-|x|^2)/(1+|x|^2)``.
    """
    base = model.check(base)
    if base.ndim != 1:
        raise ConfigurationError("base must be a single point")
    x = model.check(p)
    return distance_profile_components(model, base, [x[..., i] for i in range(model.dim)])


def halfspace_to_ball(x) -> np.ndarray:
    """Isometry from the upper half-space onto the Poincare ball.

    Composition of the reflection in ``x_{n+1} = 0`` with the inversion in
    the sphere of radius sqrt(2) about ``E_{n+1}``::

        x -> (2 x_1, ..., 2 x_n, |x|^2 - 1) / (|x'|^2 + (x_{n+1} + 1)^2)
    """
    x = np.asarray(x, dtype=float)
    if np.any(x[..., -1] <= BOUNDARY_MARGIN):
        raise DomainError("half-space points need x_{n+1} > 0")
    sq = np.einsum("...i,...i->...", x, x)
    den = sq - x[..., -1] ** 2 + (x[..., -1] + 1.0) ** 2
    out = 2.0 * x
    out[..., -1] = sq - 1.0
    return out / den[..., None]


def ball_to_halfspace(y) -> np.ndarray:
    """Inverse of :func:`halfspace_to_ball`."""
    y = np.asarray(y, dtype=float)
    if np.any(np.linalg.norm(y, axis=-1) >= 1.0 - BOUNDARY_MARGIN):
        raise DomainError("ball points need |y| < 1")
    e = np.zeros(y.shape[-1])
    e[-1] = 1.0
    diff_sq = np.einsum("...i,...i->...", y - e, y - e)
    out = 2.0 * y / diff_sq[..., None]
    out[..., -1] = (1.0 - np.einsum("...i,...i->...", y, y)) / diff_sq
    return out


@dataclass(frozen=True)
class WarpedProfile:
    """Radial profile of ``g = dr^2 + psi(r)^2 g_{S^n}`` and its derivatives."""

    K: int
    psi: Callable
    dpsi: Callable
    ddpsi: Callable
    dddpsi: Callable
    r_max: float


def warped_profile(K: int) -> WarpedProfile:
    if K == -1:
        return WarpedProfile(-1, np.sinh, np.cosh, np.sinh, np.cosh, math.inf)
    if K == 1:
        return WarpedProfile(1, np.sin, np.cos, lambda r: -np.sin(r), lambda r: -np.cos(r), math.pi)
    raise ConfigurationError(f"warped profile only defined for K = -1, +1 (got {K!r})")
