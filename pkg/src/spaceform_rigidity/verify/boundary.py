"""Pointwise checks along the support and the corner Gamma."""
from __future__ import annotations

import numpy as np

from ..diffops import covariant_hessian
from ..errors import PreconditionError
from ..fields import UmbilicalCase, require_on_support
from ..report import CheckRecord
from ..surfaces import orthonormal_complement

UNIT_TOL = 1e-10


def contact_angle(model, gamma) -> np.ndarray:
    """Angle in ``(0, pi)`` from ``mu = sin(theta) N + cos(theta) nubar``.

    ``gamma`` carries flat vectors; the g-unit ones are those divided by
    ``w``.  All inner products are taken with ``g``.
    """
    w = model.conformal_factor(gamma.points)[:, None]
    mu, N, nubar = gamma.mu / w, gamma.N / w, gamma.nubar / w

    def g(a, b):
        return (w[:, 0] ** 2) * np.einsum("bi,bi->b", a, b)

    if np.any(np.abs(g(mu, mu) - 1.0) > UNIT_TOL):
        raise PreconditionError("co-normal mu is not a unit vector")
    # normal to Gamma: mu must lie in the plane spanned by N and nubar
    resid = mu - g(mu, N)[:, None] * N - g(mu, nubar)[:, None] * nubar
    if np.any(np.sqrt(g(resid, resid)) > 1e-8):
        raise PreconditionError("co-normal mu is not normal to Gamma")
    return np.arctan2(g(mu, N), g(mu, nubar))


def tangent_basis(flat_normal: np.ndarray) -> np.ndarray:
    """Flat unit tangent vectors ``[B, d-1, d]`` orthogonal to each normal."""
    return np.stack([orthonormal_complement(n) for n in flat_normal])


def boundary_hessian_check(
    u, case: UmbilicalCase, samples_on_T, c_tilde: float, tol: float = 1e-8, robin_tol: float = 1e-8
) -> CheckRecord:
    """``max |Hess u(N, Z)|`` over support samples and a g-orthonormal tangent basis ``Z``."""
    p = require_on_support(case, samples_on_T)
    model = case.model
    w = model.conformal_factor(p)
    n_flat = case.support.flat_normal(p)
    jet = u.jet(p)
    robin = np.einsum("bi,bi->b", jet.grad, n_flat) / w - case.kappa * jet.val - c_tilde
    if np.max(np.abs(robin)) > robin_tol:
        raise PreconditionError(f"u violates the Robin condition on T (max {np.max(np.abs(robin)):.3e})")
    H = covariant_hessian(model, u, p)
    Z = tangent_basis(n_flat)
    vals = np.einsum("bij,bi,bkj->bk", H, n_flat, Z) / w[:, None] ** 2
    worst = float(np.max(np.abs(vals)))
    return CheckRecord("boundary_hessian", {"case": case.label, "samples": len(p)}, worst, 0.0, worst, tol)
