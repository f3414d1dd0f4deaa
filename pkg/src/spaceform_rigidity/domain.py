"""Cap domains ``Omega = B_Sigma  intersected with  B^int`` and their quadrature.

``Sigma`` is the part of a chart sphere ``|x - C| = rho`` lying in ``B^int``;
``T`` is the part of the support inside that sphere; ``Gamma`` is where they
meet.  Because both boundary pieces are chart spheres (or a plane), the
contact angle is constant along ``Gamma`` and has the closed form

    cos(theta) = -n_Sigma . n_S   (flat unit normals at Gamma).

Quadrature
----------
Write ``z = (x - C) . a`` with ``a`` the unit axis pointing into ``B^int``.
``Gamma`` lies in the hyperplane ``z = z0``.  The volume splits into two
ball segments, each parametrised by a polar angle ``t`` and a radial
fraction ``eta`` of the cross-section (plus an azimuth in 3D)::

    x = C0 + rho0 cos(t) A + eta rho0 sin(t) (direction in the slice)

which keeps every integrand smooth up to ``Gamma``.  ``level`` ``L`` uses
``2**L`` Gauss-Legendre panels of :data:`GAUSS_POINTS` points per interval
and ``8 * 2**L`` trapezoid nodes in azimuth.

Weights returned here are flat; callers multiply by ``w**d`` (volume),
``w**(d-1)`` (hypersurfaces) or ``w**(d-2)`` (``Gamma``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError
from .fields import UmbilicalCase
from .jets import Jet
from .surfaces import ChartHalfspace, ChartSphere, orthonormal_complement, unit_vectors

GAUSS_POINTS = 5


def gauss_panels(a: float, b: float, level: int, points: int = GAUSS_POINTS, breaks=()):
    """Composite Gauss-Legendre rule with ``2**level`` panels on ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(a, b, 2**level + 1)
    if breaks:
        edges = np.unique(np.concatenate([edges, [c for c in breaks if a < c < b]]))
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w[None, :]
    return nodes.ravel(), weights.ravel()


def azimuth_nodes(level: int):
    m = 8 * 2**level
    phi = 2.0 * np.pi * np.arange(m) / m
    return phi, np.full(m, 2.0 * np.pi / m)


@dataclass(frozen=True)
class Quadrature:
    """Flat quadrature nodes, weights and (optionally) flat unit normals."""

    points: np.ndarray
    weights: np.ndarray
    normals: Optional[np.ndarray] = None
    extra: Optional[dict] = None


@dataclass(frozen=True)
class GammaData:
    """Corner points with the four unit vectors of the normal frame (flat)."""

    points: np.ndarray
    weights: np.ndarray
    mu: np.ndarray
    nubar: np.ndarray
    nu: np.ndarray
    N: np.ndarray


def _frame(a: np.ndarray):
    rows = orthonormal_complement(a)
    return rows


def _segment_volume(C0, rho0, A, t0, level):
    """Ball segment ``{(x - C0) . A >= rho0 cos t0}`` of the ball ``|x - C0| < rho0``."""
    d = len(C0)
    B = _frame(A)
    t, wt = gauss_panels(0.0, t0, level)
    if d == 2:
        eta, we = gauss_panels(-1.0, 1.0, level)
        T, E = np.meshgrid(t, eta, indexing="ij")
        W = np.outer(wt, we) * rho0**2 * np.sin(T) ** 2
        pts = C0 + rho0 * np.cos(T)[..., None] * A + (E * rho0 * np.sin(T))[..., None] * B[0]
        return pts.reshape(-1, 2), W.ravel()
    if d == 3:
        eta, we = gauss_panels(0.0, 1.0, level)
        phi, wp = azimuth_nodes(level)
        T, E, P = np.meshgrid(t, eta, phi, indexing="ij")
        W = np.einsum("i,j,k->ijk", wt, we, wp) * rho0**3 * np.sin(T) ** 3 * E
        s = E * rho0 * np.sin(T)
        dirs = np.cos(P)[..., None] * B[0] + np.sin(P)[..., None] * B[1]
        pts = C0 + rho0 * np.cos(T)[..., None] * A + s[..., None] * dirs
        return pts.reshape(-1, 3), W.ravel()
    raise ConfigurationError("cap quadrature is implemented for ambient dimension 2 and 3")


def _sphere_cap(C0, rho0, A, t0, level):
    """Cap ``{t < t0}`` of the sphere ``|x - C0| = rho0`` about axis ``A``."""
    d = len(C0)
    B = _frame(A)
    if d == 2:
        t, wt = gauss_panels(-t0, t0, level)
        n = np.cos(t)[:, None] * A + np.sin(t)[:, None] * B[0]
        return C0 + rho0 * n, rho0 * wt, n
    t, wt = gauss_panels(0.0, t0, level)
    phi, wp = azimuth_nodes(level)
    T, P = np.meshgrid(t, phi, indexing="ij")
    W = np.outer(wt, wp) * rho0**2 * np.sin(T)
    n = (
        np.cos(T)[..., None] * A
        + (np.sin(T) * np.cos(P))[..., None] * B[0]
        + (np.sin(T) * np.sin(P))[..., None] * B[1]
    )
    n = n.reshape(-1, 3)
    return C0 + rho0 * n, W.ravel(), n


def _flat_disc(center, radius, normal, level):
    d = len(center)
    B = _frame(normal)
    if d == 2:
        y, wy = gauss_panels(-radius, radius, level)
        return center + y[:, None] * B[0], wy
    s, ws = gauss_panels(0.0, radius, level)
    phi, wp = azimuth_nodes(level)
    S, P = np.meshgrid(s, phi, indexing="ij")
    W = np.outer(ws, wp) * S
    pts = center + S[..., None] * (np.cos(P)[..., None] * B[0] + np.sin(P)[..., None] * B[1])
    return pts.reshape(-1, 3), W.ravel()


class CapDomain:
    """Lens between a chart sphere (carrying Sigma) and the case support."""

    def __init__(self, case: UmbilicalCase, center, radius: float, require_half_ball: Optional[bool] = None):
        self.case = case
        self.model = case.model
        self.dim = self.model.dim
        if self.dim not in (2, 3):
            raise ConfigurationError("cap domains are implemented for ambient dimension 2 and 3")
        self.sigma_sphere = ChartSphere(np.asarray(center, float), float(radius))
        self.C = self.sigma_sphere.center
        self.rho = self.sigma_sphere.radius
        shape = case.support.shape
        if isinstance(shape, ChartSphere):
            diff = shape.center - self.C
            D = float(np.linalg.norm(diff))
            if not (abs(self.rho - shape.radius) < D < self.rho + shape.radius):
                raise ConfigurationError("Sigma sphere does not cross the support transversally")
            self.axis = diff / D
            self.D = D
            self.z0 = (self.rho**2 + D**2 - shape.radius**2) / (2.0 * D)
            # polar angle of Gamma on the support sphere, measured from -axis
            self.s0 = math.acos(np.clip((D - self.z0) / shape.radius, -1.0, 1.0))
        else:
            self.axis = shape.normal.copy()
            self.D = None
            self.z0 = shape.offset - float(shape.normal @ self.C)
            if not abs(self.z0) < self.rho:
                raise ConfigurationError("Sigma sphere does not cross the support plane")
            self.s0 = None
        self.t0 = math.acos(np.clip(self.z0 / self.rho, -1.0, 1.0))
        self.gamma_radius = math.sqrt(self.rho**2 - self.z0**2)
        self.gamma_center = self.C + self.z0 * self.axis
        self._validate(case.half_ball if require_half_ball is None else require_half_ball)

    # -- geometry ----------------------------------------------------------
    @property
    def support(self):
        return self.case.support

    @property
    def cos_theta(self) -> float:
        """Exact contact-angle cosine from the chart geometry."""
        shape = self.support.shape
        if isinstance(shape, ChartSphere):
            rs = shape.radius
            return -(self.rho**2 + rs**2 - self.D**2) / (2.0 * self.rho * rs)
        return self.z0 / self.rho

    @property
    def theta(self) -> float:
        return math.acos(self.cos_theta)

    def contains(self, x, tol: float = 0.0) -> np.ndarray:
        return (self.sigma_sphere.residual(x) < -tol) & self.support.contains(x, tol)

    def sigma_residual(self, x) -> np.ndarray:
        return self.sigma_sphere.residual(x)

    def sigma_flat_normal(self, x) -> np.ndarray:
        return self.sigma_sphere.flat_normal(x)

    def sigma_principal_curvature(self, x) -> np.ndarray:
        x = np.atleast_2d(x)
        w = self.model.conformal_factor(x)
        df = self.model.log_factor_gradient(x)
        n = self.sigma_sphere.flat_normal(x)
        return (1.0 / self.rho + np.einsum("bi,bi->b", n, df)) / w

    def _validate(self, half_ball: bool):
        probe = np.concatenate([self.sigma(3).points, self.T(3).points, self.gamma().points])
        if not np.all(self.model.inside(probe, 1e-6)):
            raise ConfigurationError("the cap domain leaves the chart")
        if half_ball and np.min(probe[:, -1]) <= 0.0:
            raise ConfigurationError("the cap domain is not inside the half ball x_{n+1} > 0")

    # -- boundary parametrisations (2D meshing) -------------------------------
    def boundary_pieces(self):
        """Counter-clockwise ``(tag, curve)`` pieces with ``curve(s)``, ``s in [0, 1]``.

        Sigma runs from one corner to the other and T runs back.
        """
        if self.dim != 2:
            raise ConfigurationError("boundary curves are only defined in 2D")
        a = self.axis
        b = np.array([-a[1], a[0]])
        C, rho, t0 = self.C, self.rho, self.t0

        def sigma_curve(s):
            t = -t0 + 2.0 * t0 * np.asarray(s, float)
            return C + rho * (np.cos(t)[..., None] * a + np.sin(t)[..., None] * b)

        shape = self.support.shape
        if isinstance(shape, ChartSphere):
            CS, rs, s0 = shape.center, shape.radius, self.s0

            def t_curve(s):
                # from the +b corner back to the -b corner along the support
                u = s0 - 2.0 * s0 * np.asarray(s, float)
                return CS + rs * (-np.cos(u)[..., None] * a + np.sin(u)[..., None] * b)

        else:
            gc, gr = self.gamma_center, self.gamma_radius

            def t_curve(s):
                y = gr - 2.0 * gr * np.asarray(s, float)
                return gc + y[..., None] * b

        return [("S", sigma_curve), ("T", t_curve)]

    def interior_point(self) -> np.ndarray:
        """A point well inside Omega (midpoint of the two apexes on the axis)."""
        top = self.C + self.rho * self.axis
        shape = self.support.shape
        if isinstance(shape, ChartSphere):
            bottom = shape.center - shape.radius * self.axis
        else:
            bottom = self.gamma_center
        return 0.5 * (top + bottom)

    # -- quadrature ------------------------------------------------------------
    def volume(self, level: int) -> Quadrature:
        pts, w = _segment_volume(self.C, self.rho, self.axis, self.t0, level)
        shape = self.support.shape
        if isinstance(shape, ChartSphere):
            p2, w2 = _segment_volume(shape.center, shape.radius, -self.axis, self.s0, level)
            pts, w = np.concatenate([pts, p2]), np.concatenate([w, w2])
        return Quadrature(pts, w)

    def sigma(self, level: int) -> Quadrature:
        pts, w, n = _sphere_cap(self.C, self.rho, self.axis, self.t0, level)
        return Quadrature(pts, w, n)

    def T(self, level: int) -> Quadrature:
        shape = self.support.shape
        if isinstance(shape, ChartSphere):
            pts, w, n = _sphere_cap(shape.center, shape.radius, -self.axis, self.s0, level)
            return Quadrature(pts, w, n)
        pts, w = _flat_disc(self.gamma_center, self.gamma_radius, self.axis, level)
        return Quadrature(pts, w, np.broadcast_to(-self.axis, pts.shape).copy())

    def gamma(self, level: int = 0) -> GammaData:
        B = _frame(self.axis)
        if self.dim == 2:
            dirs = np.stack([B[0], -B[0]])
            w = np.ones(2)
        else:
            phi, w = azimuth_nodes(level)
            dirs = np.cos(phi)[:, None] * B[0] + np.sin(phi)[:, None] * B[1]
            w = w * self.gamma_radius
        pts = self.gamma_center + self.gamma_radius * dirs
        return corner_frame(pts, w, self.sigma_flat_normal(pts), self.support.flat_normal(pts))


def corner_frame(points, weights, n_sigma, n_support) -> GammaData:
    """Flat unit conormals at Gamma from the two boundary normals.

    ``mu`` (conormal of Gamma in Sigma) leans out of ``B^int``; ``nubar``
    (conormal of Gamma in the support) leans out of the Sigma side.
    """
    def _unit(v):
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    c = np.einsum("bi,bi->b", n_sigma, n_support)[:, None]
    mu = _unit(n_support - c * n_sigma)
    nubar = _unit(n_sigma - c * n_support)
    return GammaData(points, weights, mu, nubar, n_sigma, n_support)


def cap_from_angle(
    case: UmbilicalCase,
    theta: float,
    radius: float,
    direction=None,
    foot=None,
    require_half_ball: Optional[bool] = None,
) -> CapDomain:
    """Cap meeting the support at contact angle ``theta`` with Sigma radius ``radius``.

    Spherical support: the Sigma centre is ``C_S + D * direction`` with
    ``D^2 = rho^2 + rho_S^2 + 2 rho rho_S cos(theta)``.  Planar support: the
    centre sits at ``foot - rho cos(theta) m`` for a foot point on the plane.
    """
    if not 0.0 < theta < math.pi:
        raise ConfigurationError("contact angle must lie in (0, pi)")
    shape = case.support.shape
    d = case.model.dim
    if isinstance(shape, ChartSphere):
        e = np.zeros(d)
        e[-1] = 1.0
        e = e if direction is None else np.asarray(direction, float) / np.linalg.norm(direction)
        rs = shape.radius
        D = math.sqrt(radius**2 + rs**2 + 2.0 * radius * rs * math.cos(theta))
        center = shape.center + D * e
    else:
        p = shape.base_point if foot is None else shape.project(np.asarray(foot, float))
        center = p - radius * math.cos(theta) * shape.normal
    return CapDomain(case, center, radius, require_half_ball=require_half_ball)


def sample_cap(domain: CapDomain, rng: np.random.Generator, count: int, where: str = "interior") -> np.ndarray:
    """Rejection samples of ``Omega`` (``"interior"``), ``Sigma`` or ``T``."""
    shape = domain.support.shape
    out, have = [], 0
    for _ in range(1000):
        m = 4 * count
        if where == "interior":
            r = domain.rho * rng.uniform(0.0, 1.0, m) ** (1.0 / domain.dim)
            cand = domain.C + r[:, None] * unit_vectors(rng, m, domain.dim)
            ok = domain.contains(cand, 1e-9)
        elif where == "sigma":
            cand = domain.sigma_sphere.sample(rng, m)
            ok = domain.support.contains(cand, 1e-9)
        elif where == "T":
            if isinstance(shape, ChartSphere):
                cand = shape.sample(rng, m)
            else:
                r = domain.gamma_radius * rng.uniform(0.0, 1.0, m) ** (1.0 / (domain.dim - 1))
                B = orthonormal_complement(shape.normal)
                dirs = unit_vectors(rng, m, domain.dim - 1) @ B
                cand = shape.project(domain.gamma_center[None] + r[:, None] * dirs)
            ok = domain.sigma_residual(cand) < -1e-9
        else:
            raise ConfigurationError(f"unknown sample region {where!r}")
        out.append(cand[ok])
        have += int(ok.sum())
        if have >= count:
            return np.concatenate(out)[:count]
    raise ConfigurationError(f"could not sample {count} points of {where}")


# -- a non-umbilical Sigma in 2D -------------------------------------------------------


class PerturbedCap2D:
    """2D domain whose Sigma is the radial graph ``r(t) = rho (1 + eps g(t))``.

    ``t`` is the polar angle about the base cap centre measured from its
    axis.  ``g`` is applied to a 1-variable jet so that curvature is exact.

    profile:
      ``"bump"``  ``(1 - (t/beta)^2)^4`` on ``|t| < beta``; symmetric, and
                  vanishing near Gamma when ``beta < t0`` so the contact
                  angle is unchanged.
      ``"tilt"``  ``sin(t) (1 + cos(t))``; breaks the mirror symmetry so the
                  two corner angles differ.
    """

    def __init__(self, base: CapDomain, eps: float, profile: str = "bump", beta: Optional[float] = None):
        if base.dim != 2:
            raise ConfigurationError("perturbed caps are 2D only")
        self.base = base
        self.case = base.case
        self.model = base.model
        self.dim = 2
        self.eps = float(eps)
        self.profile = profile
        self.beta = 0.6 * base.t0 if beta is None else float(beta)
        self.C, self.rho = base.C, base.rho
        self.a = base.axis
        self.b = np.array([-self.a[1], self.a[0]])
        self.t_minus, self.t_plus = self._corners()
        pts = self._curve(np.array([self.t_minus, self.t_plus]))[0]
        self._gamma_pts = pts

    # radial profile
    def _g(self, t):
        if self.profile == "bump":
            s = t / self.beta
            one = 1.0 - s * s
            q = one * one
            return q * q
        if self.profile == "tilt":
            from . import jets as J

            return J.sin(t) * (1.0 + J.cos(t))
        raise ConfigurationError(f"unknown perturbation profile {self.profile!r}")

    def _r_jet(self, t):
        t = np.asarray(t, float)
        tj = Jet.variables(t[:, None], order=2)[0]
        g = self._g(tj)
        if self.profile == "bump":
            mask = (np.abs(t) < self.beta).astype(float)
            g = Jet(g.val * mask, g.grad * mask[:, None], g.hess * mask[:, None, None])
        return self.rho * (1.0 + self.eps * g)

    def _curve(self, t):
        """Points, unit tangent (increasing t), flat speed and flat curvature."""
        t = np.asarray(t, float)
        rj = self._r_jet(t)
        r, r1, r2 = rj.val, rj.grad[:, 0], rj.hess[:, 0, 0]
        er = np.cos(t)[:, None] * self.a + np.sin(t)[:, None] * self.b
        et = -np.sin(t)[:, None] * self.a + np.cos(t)[:, None] * self.b
        pts = self.C + r[:, None] * er
        tan = r1[:, None] * er + r[:, None] * et
        speed = np.linalg.norm(tan, axis=1)
        kflat = (r * r + 2.0 * r1 * r1 - r * r2) / speed**3
        return pts, tan / speed[:, None], speed, kflat

    def _corners(self):
        def res(t):
            return float(self.case.support.residual(self._curve(np.array([t]))[0])[0])

        t0 = self.base.t0
        lo, hi = 0.0, min(math.pi, 1.6 * t0 + 0.2)
        if res(lo) >= 0:
            raise ConfigurationError("perturbed Sigma apex is outside B^int")
        tp = brentq(res, lo, hi, xtol=1e-15, rtol=1e-15)
        tm = brentq(res, -hi, lo, xtol=1e-15, rtol=1e-15)
        return tm, tp

    def _sigma_normal(self, tan):
        # outward: rotate the counter-clockwise tangent clockwise
        return np.stack([tan[:, 1], -tan[:, 0]], axis=1)

    def sigma_principal_curvature_at(self, t) -> np.ndarray:
        pts, tan, _, kflat = self._curve(t)
        n = self._sigma_normal(tan)
        w = self.model.conformal_factor(pts)
        df = self.model.log_factor_gradient(pts)
        return (kflat + np.einsum("bi,bi->b", n, df)) / w

    def sigma(self, level: int) -> Quadrature:
        breaks = (-self.beta, self.beta) if self.profile == "bump" else ()
        t, wt = gauss_panels(self.t_minus, self.t_plus, level, breaks=breaks)
        pts, tan, speed, _ = self._curve(t)
        H = self.sigma_principal_curvature_at(t)
        return Quadrature(pts, wt * speed, self._sigma_normal(tan), {"H": H, "t": t})

    def T(self, level: int) -> Quadrature:
        shape = self.case.support.shape
        g = self._gamma_pts
        if isinstance(shape, ChartSphere):
            rel = g - shape.center
            ang = np.arctan2(rel @ self.b, rel @ (-self.a))
            u, wu = gauss_panels(ang.min(), ang.max(), level)
            n = -np.cos(u)[:, None] * self.a + np.sin(u)[:, None] * self.b
            return Quadrature(shape.center + shape.radius * n, shape.radius * wu, n)
        y = (g - self.base.gamma_center) @ self.b
        s, ws = gauss_panels(y.min(), y.max(), level)
        foot = shape.project(self.base.gamma_center[None])[0]
        pts = foot + s[:, None] * self.b
        return Quadrature(pts, ws, np.broadcast_to(-self.a, pts.shape).copy())

    def gamma(self, level: int = 0) -> GammaData:
        pts, tan, _, _ = self._curve(np.array([self.t_minus, self.t_plus]))
        return corner_frame(pts, np.ones(2), self._sigma_normal(tan), self.case.support.flat_normal(pts))

    def volume(self, level: int) -> Quadrature:
        """Polar quadrature about an interior point, split at the corner rays."""
        P = self.base.interior_point()
        rel = self._gamma_pts - P
        gam = np.sort(np.arctan2(rel @ self.b, rel @ self.a))
        # Sigma is seen on the arc through angle 0, T on the complementary arc
        arcs = [(gam[0], gam[1], "S"), (gam[1], gam[0] + 2 * np.pi, "T")]
        pts_all, w_all = [], []
        for lo, hi, tag in arcs:
            psi, wpsi = gauss_panels(lo, hi, level)
            dirs = np.cos(psi)[:, None] * self.a + np.sin(psi)[:, None] * self.b
            R = self._ray_exit(P, dirs, tag)
            s, ws = gauss_panels(0.0, 1.0, level)
            rr = R[:, None] * s[None, :]
            pts = P + rr[..., None] * dirs[:, None, :]
            W = (wpsi[:, None] * ws[None, :]) * rr * R[:, None]
            pts_all.append(pts.reshape(-1, 2))
            w_all.append(W.ravel())
        return Quadrature(np.concatenate(pts_all), np.concatenate(w_all))

    def _ray_exit(self, P, dirs, tag):
        if tag == "T":
            return self.case.support.shape.ray_exit(P, dirs)
        out = np.empty(len(dirs))
        for i, e in enumerate(dirs):
            ang = math.atan2(float(e @ self.b), float(e @ self.a))

            def f(t):
                q = self._curve(np.array([t]))[0][0] - P
                return math.atan2(float(q @ self.b), float(q @ self.a)) - ang

            t = brentq(f, self.t_minus - 1e-9, self.t_plus + 1e-9, xtol=1e-15, rtol=1e-15)
            out[i] = np.linalg.norm(self._curve(np.array([t]))[0][0] - P)
        return out

    def contains(self, x, tol: float = 0.0) -> np.ndarray:
        x = np.atleast_2d(x)
        rel = x - self.C
        t = np.arctan2(rel @ self.b, rel @ self.a)
        r = self._r_jet(t).val
        return (np.linalg.norm(rel, axis=1) < r - tol) & self.case.support.contains(x, tol)

    def boundary_pieces(self):
        tm, tp = self.t_minus, self.t_plus

        def sigma_curve(s):
            return self._curve(tm + (tp - tm) * np.atleast_1d(np.asarray(s, float)))[0]

        shape = self.case.support.shape
        g = self._gamma_pts
        if isinstance(shape, ChartSphere):
            rel = g - shape.center
            ang = np.arctan2(rel @ self.b, rel @ (-self.a))
            u_hi, u_lo = ang.max(), ang.min()

            def t_curve(s):
                u = u_hi + (u_lo - u_hi) * np.atleast_1d(np.asarray(s, float))
                return shape.center + shape.radius * (-np.cos(u)[:, None] * self.a + np.sin(u)[:, None] * self.b)

        else:
            y = (g - self.base.gamma_center) @ self.b
            foot = shape.project(self.base.gamma_center[None])[0]

            def t_curve(s):
                yy = y.max() + (y.min() - y.max()) * np.atleast_1d(np.asarray(s, float))
                return foot + yy[:, None] * self.b

        return [("S", sigma_curve), ("T", t_curve)]

    def interior_point(self) -> np.ndarray:
        return self.base.interior_point()
