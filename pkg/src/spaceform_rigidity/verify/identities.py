"""Integral identities on cap domains.

* the P-function identity: for every constant ``a``

      int_Omega -V u Lap P_u dvol
          = 1/2 int_Sigma (|grad u|^2 - a) [V (u - phi)_nu - V_nu (u - phi)] dA,

* the Sigma "Wronskian" ``int_Sigma [V (u - phi)_nu - (u - phi) V_nu] dA``,
* the divergence formulas for the Killing field ``Y``,
* the Minkowski formula for constant-angle hypersurfaces,
* the mean-curvature balance for CMC caps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..auxiliary import AuxFunction
from ..diffops import directional_derivative
from ..errors import ConfigurationError, PreconditionError
from ..fields import UmbilicalCase
from ..report import CheckRecord
from .boundary import contact_angle
from .integrals import gamma_data, metric_pairing, normal_derivative, p_laplacian, sigma_data, t_data, volume_integral

#: the support Robin property of ``V`` must hold to this relative accuracy
V_ROBIN_TOL = 1e-8


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    quadrature_level: int
    a_constant: float

    def record(self, tol_lhs: float, tol_rhs: float, inputs: dict | None = None) -> CheckRecord:
        """Pass iff ``|lhs| <= tol_lhs`` and ``|rhs| <= tol_rhs`` (exact data, both sides zero)."""
        worst = max(abs(self.lhs) / tol_lhs, abs(self.rhs) / tol_rhs)
        data = {"a": self.a_constant, "level": self.quadrature_level, **(inputs or {})}
        return CheckRecord("identity.P", data, self.lhs, self.rhs, worst, 1.0, note="residual = max(|lhs|/tol, |rhs|/tol)")


def _require_V_robin(case: UmbilicalCase, V, domain, level: int):
    pts, _, n_flat, w = t_data(domain, level)
    jv = V.jet(pts)
    res = normal_derivative(jv, n_flat, w) - case.kappa * jv.val
    scale = np.maximum(1.0, np.abs(jv.val))
    if np.max(np.abs(res) / scale) > V_ROBIN_TOL:
        raise PreconditionError("V does not satisfy d_N V = kappa V on T")


def _wronskian_density(u, aux: AuxFunction, V, pts, n_flat, w):
    ju = u.jet(pts)
    jp = aux.evaluator.jet(pts)
    jv = V.jet(pts)
    diff_val = ju.val - jp.val
    diff_nu = normal_derivative(ju, n_flat, w) - normal_derivative(jp, n_flat, w)
    return ju, jv.val * diff_nu - normal_derivative(jv, n_flat, w) * diff_val


def check_integral_identity(domain, u, aux: AuxFunction, V, a: float, quadrature_level: int = 4) -> IdentityReport:
    case = aux.case
    _require_V_robin(case, V, domain, quadrature_level)
    L = quadrature_level
    lhs = volume_integral(domain, lambda p: -V.value(p) * u.value(p) * p_laplacian(u, p), L)
    pts, dA, n_flat, w, _ = sigma_data(domain, L)
    ju, bracket = _wronskian_density(u, aux, V, pts, n_flat, w)
    grad_sq = np.einsum("bi,bi->b", ju.grad, ju.grad) / w**2
    rhs = 0.5 * float(np.sum((grad_sq - a) * bracket * dA))
    res = abs(lhs - rhs)
    return IdentityReport(lhs, rhs, res, res / max(abs(lhs), abs(rhs), 1e-300), L, float(a))


def sigma_wronskian_integral(domain, u, aux: AuxFunction, V, quadrature_level: int = 4) -> float:
    pts, dA, n_flat, w, _ = sigma_data(domain, quadrature_level)
    _, bracket = _wronskian_density(u, aux, V, pts, n_flat, w)
    return float(np.sum(bracket * dA))


def check_divergence_formulas(case: UmbilicalCase, domain, quadrature_level: int = 4, tol: float = 1e-7):
    """``int_Sigma g(nu,Y) = -(1/M) int_T V`` and ``int_Sigma H g(nu,Y) = -int_Gamma g(mu,Y)``."""
    L = quadrature_level
    pts, dA, n_flat, w, H = sigma_data(domain, L)
    gY = metric_pairing(case.Y.value(pts), n_flat, w)
    tp, tA, _, _ = t_data(domain, L)
    g, ds, wg = gamma_data(domain, L)
    lhs1 = float(np.sum(gY * dA))
    rhs1 = -float(np.sum(case.V.value(tp) * tA)) / case.minkowski_const
    lhs2 = float(np.sum(H * gY * dA))
    rhs2 = -float(np.sum(metric_pairing(case.Y.value(g.points), g.mu, wg) * ds))
    inputs = {"case": case.label, "level": L}
    return [
        CheckRecord("divergence.Y_flux", inputs, lhs1, rhs1, abs(lhs1 - rhs1), tol),
        CheckRecord("divergence.Y_conormal", inputs, lhs2, rhs2, abs(lhs2 - rhs2), tol),
    ]


def measured_angles(domain, level: int = 0) -> np.ndarray:
    g = domain.gamma(level)
    return contact_angle(domain.model, g)


def constant_angle(domain, level: int = 2, tol: float = 1e-8) -> float:
    th = measured_angles(domain, level)
    if np.max(th) - np.min(th) > tol:
        raise PreconditionError(f"contact angle varies along Gamma ({np.min(th):.6f} .. {np.max(th):.6f})")
    return float(np.mean(th))


def check_minkowski(
    case: UmbilicalCase, domain, theta: float | None = None, quadrature_level: int = 4, tol: float = 1e-6, force: bool = False
) -> CheckRecord:
    """``int_Sigma n (V + M cos(theta) g(nu, Y)) dA = int_Sigma H g(nu, X) dA``.

    The angle must be constant along Gamma; ``force`` skips that check (and
    uses the mean angle when ``theta`` is not given) for negative controls.
    """
    if force:
        th = float(np.mean(measured_angles(domain))) if theta is None else float(theta)
    else:
        th = constant_angle(domain)
        if theta is not None and abs(th - theta) > 1e-8:
            raise PreconditionError(f"measured angle {th:.10f} differs from the stated {theta:.10f}")
    L = quadrature_level
    n = case.model.n
    pts, dA, n_flat, w, H = sigma_data(domain, L)
    V = case.V.value(pts)
    gY = metric_pairing(case.Y.value(pts), n_flat, w)
    gX = metric_pairing(case.X.value(pts), n_flat, w)
    lhs = float(np.sum(n * (V + case.minkowski_const * math.cos(th) * gY) * dA))
    rhs = float(np.sum(H * gX * dA))
    return CheckRecord(
        "minkowski", {"case": case.label, "theta": th, "level": L}, lhs, rhs, abs(lhs - rhs), tol
    )


def mean_curvature_balance(
    case: UmbilicalCase, domain, theta: float | None = None, quadrature_level: int = 4, tol: float = 1e-6
) -> CheckRecord:
    """``H (int V dvol + n/(n+1) cos(theta) (int_T V)^2 / (M int_Gamma g(mu,Y))) = n/(n+1) int_Sigma V``.

    For a Sigma that is not CMC the area-weighted mean of ``H`` is used; the
    relation then fails, which is the point of the negative control.
    """
    L = quadrature_level
    n = case.model.n
    th = float(np.mean(measured_angles(domain))) if theta is None else float(theta)
    pts, dA, _, _, H = sigma_data(domain, L)
    H_mean = float(np.sum(H * dA) / np.sum(dA))
    vol_V = volume_integral(domain, case.V.value, L)
    tp, tA, _, _ = t_data(domain, L)
    T_V = float(np.sum(case.V.value(tp) * tA))
    g, ds, wg = gamma_data(domain, L)
    G_Y = float(np.sum(metric_pairing(case.Y.value(g.points), g.mu, wg) * ds))
    if abs(G_Y) < 1e-14:
        raise ConfigurationError("degenerate configuration: int_Gamma g(mu, Y) ds vanishes")
    lhs = H_mean * (vol_V + n / (n + 1) * math.cos(th) * T_V**2 / (case.minkowski_const * G_Y))
    rhs = n / (n + 1) * float(np.sum(case.V.value(pts) * dA))
    return CheckRecord(
        "mean_curvature_balance",
        {"case": case.label, "theta": th, "level": L, "H": H_mean},
        lhs,
        rhs,
        abs(lhs - rhs),
        tol,
    )


def robin_residual_on_T(u, case: UmbilicalCase, c_tilde: float, points) -> np.ndarray:
    N = case.support.normal(points)
    return directional_derivative(u, points, N) - case.kappa * u.value(points) - c_tilde
