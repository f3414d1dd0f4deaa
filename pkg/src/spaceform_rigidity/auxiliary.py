"""Auxiliary functions solving the resolvent system on a support case.

For every case the function is radial about a base point ``p``,

    phi = c * psi_dot(d(p, x)) + K / (n+1),

with ``psi_dot = cosh`` (K = -1) or ``cos`` (K = +1), so that
``Hess phi = (1/(n+1) - K phi) g`` everywhere.  The constants are chosen so
that ``d_N phi = kappa phi + c_tilde`` on the support:

====== =================== ================================================
case   base point          coefficient
====== =================== ================================================
1      origin              c0 = (c~ - kappa/(n+1)) / ((1 - kappa^2) sinh R)
2      anchor on L_alpha   c0 = 1/(n+1) - c~ / cos(alpha)
3      (0, ..., 0, c0)     1, with c0 = c~ / (1 + sqrt(1 + c~^2))
4      origin              c0 = -(c~ + kappa/(n+1)) / (sin R (1 + kappa^2))
====== =================== ================================================

In the ball chart the case-2 anchor is the origin and ``psi_dot`` is
``V_3``; in the half-space chart it is ``E_{n+1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffops import ScalarField, covariant_hessian, directional_derivative, orthonormal
from .fields import CaseId, UmbilicalCase, sample_interior, sample_support
from .geometry import distance_profile_components
from .pfunction import p_function
from .report import CheckRecord


def solve_c0(case: UmbilicalCase, c_tilde: float) -> float:
    n1 = case.model.dim
    k = case.kappa
    cid = case.case_id
    if cid is CaseId.GEODESIC_SPHERE_H:
        return (c_tilde - k / n1) / ((1.0 - k * k) * math.sinh(case.param))
    if cid is CaseId.EQUIDISTANT_H:
        return 1.0 / n1 - c_tilde / k
    if cid is CaseId.GEODESIC_PLANE_H:
        c0 = c_tilde / (1.0 + math.sqrt(1.0 + c_tilde * c_tilde))
        assert abs(c0) < 1.0
        return c0
    return -(c_tilde + k / n1) / (math.sin(case.param) * (1.0 + k * k))


@dataclass(frozen=True)
class AuxFunction:
    case: UmbilicalCase
    c_tilde: float
    c0: float
    base_point: np.ndarray
    coefficient: float
    evaluator: ScalarField

    def value(self, points) -> np.ndarray:
        return self.evaluator.value(points)


def _base_and_coefficient(case: UmbilicalCase, c0: float):
    d = case.model.dim
    origin = np.zeros(d)
    if case.case_id is CaseId.GEODESIC_PLANE_H:
        base = origin.copy()
        base[-1] = c0
        return base, 1.0
    if case.case_id is CaseId.EQUIDISTANT_H:
        return np.asarray(case.anchor, float), c0
    return origin, c0


def make_aux(case: UmbilicalCase, c_tilde: float) -> AuxFunction:
    c0 = solve_c0(case, float(c_tilde))
    base, coef = _base_and_coefficient(case, c0)
    case.model.check(base)
    shift = case.K / case.model.dim
    model = case.model

    def phi(xs):
        return coef * distance_profile_components(model, base, xs) + shift

    return AuxFunction(case, float(c_tilde), c0, base, coef, ScalarField(model, phi, f"phi[c~={c_tilde:g}]"))


def eval_phi(aux: AuxFunction, p):
    """Value, gradient and Hessian of the auxiliary function at ``p``."""
    return aux.evaluator.jet(aux.case.model.check(np.atleast_2d(p)))


def hessian_residual(aux: AuxFunction, points) -> np.ndarray:
    """``|Hess phi - (1/(n+1) - K phi) g|`` (max entry, orthonormal frame)."""
    model = aux.case.model
    H = orthonormal(model, points, covariant_hessian(model, aux.evaluator, points))
    target = 1.0 / model.dim - model.K * aux.value(points)
    R = H - target[:, None, None] * np.eye(model.dim)
    return np.max(np.abs(R), axis=(-2, -1))


def robin_residual(aux: AuxFunction, points) -> np.ndarray:
    case = aux.case
    N = case.support.normal(points)
    dphi = directional_derivative(aux.evaluator, points, N)
    return np.abs(dphi - case.kappa * aux.value(points) - aux.c_tilde)


def verify_resolvent(
    aux: AuxFunction, sample_count: int = 1000, rng: np.random.Generator | None = None, tol: float = 1e-9
) -> list[CheckRecord]:
    rng = np.random.default_rng(0) if rng is None else rng
    case = aux.case
    inner = sample_interior(case, rng, sample_count)
    surf = sample_support(case, rng, sample_count)
    h = float(np.max(hessian_residual(aux, inner)))
    r = float(np.max(robin_residual(aux, surf)))
    lap_p = float(np.max(np.abs(p_function(aux.evaluator).laplacian(inner))))
    inputs = {"case": case.label, "c_tilde": aux.c_tilde, "c0": aux.c0}
    return [
        CheckRecord("aux.hessian", inputs, h, 0.0, h, tol),
        CheckRecord("aux.robin", inputs, r, 0.0, r, tol),
        CheckRecord("aux.lap_P", inputs, lap_p, 0.0, lap_p, 1e-8),
    ]
