"""Hypersurfaces that are Euclidean spheres or hyperplanes in a chart.

Umbilical hypersurfaces of a space form are exactly the Euclidean spheres
and hyperplanes of a conformal chart.  Each shape here bounds a region
(the open ball, or the open half-space ``m.x > h``); normals point out of
that region.  For ``g = e^{2f} delta`` the principal curvature with respect
to the outward unit normal ``N = n / w`` is

    kappa_bar = (kappa_flat + d_n f) / w,

with ``kappa_flat = 1 / radius`` for spheres and 0 for planes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import ConfigurationError
from .geometry import SpaceFormModel


def unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def orthonormal_complement(axis: np.ndarray) -> np.ndarray:
    """Rows spanning the hyperplane orthogonal to ``axis``."""
    a = np.asarray(axis, float)
    a = a / np.linalg.norm(a)
    # Householder reflection sending e_0 to a; its other columns span a-perp
    e = np.zeros_like(a)
    e[0] = 1.0
    v = e - a
    if np.linalg.norm(v) < 1e-14:
        return np.eye(len(a))[1:]
    v /= np.linalg.norm(v)
    H = np.eye(len(a)) - 2.0 * np.outer(v, v)
    return H[:, 1:].T


@dataclass(frozen=True)
class ChartSphere:
    """``|x - center| = radius``; the region is the open ball."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not self.radius > 0:
            raise ConfigurationError("sphere radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def residual(self, x) -> np.ndarray:
        return np.linalg.norm(np.asarray(x, float) - self.center, axis=-1) - self.radius

    def flat_normal(self, x) -> np.ndarray:
        d = np.asarray(x, float) - self.center
        return d / np.linalg.norm(d, axis=-1, keepdims=True)

    @property
    def flat_curvature(self) -> float:
        return 1.0 / self.radius

    def project(self, x) -> np.ndarray:
        return self.center + self.radius * self.flat_normal(x)

    def ray_exit(self, origin, directions) -> np.ndarray:
        """Distance from an interior ``origin`` to the sphere along unit ``directions``."""
        q = np.asarray(origin, float) - self.center
        b = directions @ q
        c = q @ q - self.radius**2
        return -b + np.sqrt(b * b - c)

    def sample(self, rng, count):
        return self.center + self.radius * unit_vectors(rng, count, self.dim)


@dataclass(frozen=True)
class ChartHalfspace:
    """Hyperplane ``m . x = offset``; the region is ``m . x > offset``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        m = np.asarray(self.normal, dtype=float)
        nrm = np.linalg.norm(m)
        if nrm == 0:
            raise ConfigurationError("plane normal must be nonzero")
        object.__setattr__(self, "normal", m / nrm)
        object.__setattr__(self, "offset", float(self.offset) / nrm)

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def residual(self, x) -> np.ndarray:
        return self.offset - np.asarray(x, float) @ self.normal

    def flat_normal(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        return np.broadcast_to(-self.normal, x.shape).copy()

    @property
    def flat_curvature(self) -> float:
        return 0.0

    def project(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        return x + self.residual(x)[..., None] * self.normal

    def ray_exit(self, origin, directions) -> np.ndarray:
        speed = directions @ (-self.normal)
        gap = np.asarray(origin, float) @ self.normal - self.offset
        with np.errstate(divide="ignore"):
            t = np.where(speed > 0, gap / np.where(speed > 0, speed, 1.0), np.inf)
        return t

    @property
    def base_point(self) -> np.ndarray:
        return self.offset * self.normal

    def sample(self, rng, count, half_width: float = 1.0, center=None):
        c = self.base_point if center is None else self.project(center)
        basis = orthonormal_complement(self.normal)
        coeff = rng.uniform(-half_width, half_width, size=(count, basis.shape[0]))
        return c + coeff @ basis


Shape = Union[ChartSphere, ChartHalfspace]


@dataclass(frozen=True)
class Support:
    """An umbilical hypersurface, its chart, principal curvature and sides.

    ``region`` of the shape is the side called ``B^int``; the unit
    normal returned by :meth:`normal` points out of it.
    """

    model: SpaceFormModel
    shape: Shape
    kappa: float
    name: str = ""
    sample_window: Optional[dict] = field(default=None, compare=False)

    def residual(self, x) -> np.ndarray:
        return self.shape.residual(x)

    def contains(self, x, tol: float = 0.0) -> np.ndarray:
        return self.residual(x) < -tol

    def flat_normal(self, x) -> np.ndarray:
        return self.shape.flat_normal(x)

    def normal(self, x) -> np.ndarray:
        """g-unit outward normal (chart components)."""
        x = np.atleast_2d(x)
        w = self.model.conformal_factor(x)
        return self.shape.flat_normal(x) / w[:, None]

    def principal_curvature(self, x) -> np.ndarray:
        """Principal curvature from chart geometry (constant on umbilical shapes)."""
        x = np.atleast_2d(x)
        w = self.model.conformal_factor(x)
        df = self.model.log_factor_gradient(x)
        n = self.shape.flat_normal(x)
        return (self.shape.flat_curvature + np.einsum("bi,bi->b", n, df)) / w

    def sample(self, rng, count: int, margin: float = 0.05, predicate=None, max_rounds: int = 200):
        """Random points of the surface at least ``margin`` inside the chart."""
        kw = self.sample_window or {}
        pts = []
        have = 0
        for _ in range(max_rounds):
            cand = self.shape.sample(rng, 4 * count, **kw)
            ok = self.model.inside(cand, margin)
            if predicate is not None:
                ok &= predicate(cand)
            cand = cand[ok]
            pts.append(cand)
            have += len(cand)
            if have >= count:
                break
        out = np.concatenate(pts)[:count]
        if len(out) < count:
            raise ConfigurationError(f"could only sample {len(out)} of {count} points on {self.name}")
        return self.shape.project(out)
