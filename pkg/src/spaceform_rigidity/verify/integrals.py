"""Conformally weighted integrals over a domain, its boundary pieces and Gamma."""
from __future__ import annotations

import numpy as np

from ..jets import Jet
from ..pfunction import p_function


def p_laplacian(u, points) -> np.ndarray:
    """``Lap P_u``: mesh fields supply their own, closed forms are differentiated."""
    if hasattr(u, "p_laplacian"):
        return u.p_laplacian(points)
    return p_function(u).laplacian(points)


def volume_integral(domain, f, level: int) -> float:
    q = domain.volume(level)
    w = domain.model.conformal_factor(q.points)
    return float(np.sum(f(q.points) * w**domain.dim * q.weights))


def sigma_data(domain, level: int):
    """Sigma nodes with conformal area weights, flat normals and mean curvature ``H``.

    ``H`` is the sum of the principal curvatures (``n`` times the principal
    curvature for a spherical cap) with respect to the outward normal.
    """
    q = domain.sigma(level)
    w = domain.model.conformal_factor(q.points)
    n = domain.model.n
    if q.extra is not None and "H" in q.extra:
        H = n * q.extra["H"]
    else:
        H = n * domain.sigma_principal_curvature(q.points)
    return q.points, q.weights * w ** (domain.dim - 1), q.normals, w, H


def t_data(domain, level: int):
    q = domain.T(level)
    w = domain.model.conformal_factor(q.points)
    return q.points, q.weights * w ** (domain.dim - 1), q.normals, w


def gamma_data(domain, level: int):
    g = domain.gamma(level)
    w = domain.model.conformal_factor(g.points)
    return g, g.weights * w ** (domain.dim - 2), w


def normal_derivative(jet: Jet, flat_normal: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``d_nu f = g(grad f, nu)`` with ``nu = n_flat / w``."""
    return np.einsum("bi,bi->b", jet.grad, flat_normal) / w


def metric_pairing(vectors: np.ndarray, flat_normal: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``g(nu, Z) = w^2 <n_flat / w, Z> = w <n_flat, Z>``."""
    return w * np.einsum("bi,bi->b", vectors, flat_normal)
