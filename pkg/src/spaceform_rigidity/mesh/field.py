"""Smooth reconstruction of a P1 solution for pointwise and integral checks.

Each vertex gets a least-squares quadratic fitted to the nodal values of its
two-ring patch.  At a point the vertex quadratics are blended with the
barycentric coordinates of the containing triangle (the nearest triangle
for points on the curved boundary just outside the polygon).  The result
exposes the ``value`` / ``jet`` interface of closed-form fields.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..diffops import covariant_hessian, orthonormal
from ..jets import Jet
from .fem import BvpSolution

NEIGHBOURS = 8


def _adjacency(simplices: np.ndarray, nv: int) -> list[set]:
    adj = [set() for _ in range(nv)]
    for a, b, c in simplices:
        adj[a] |= {b, c}
        adj[b] |= {a, c}
        adj[c] |= {a, b}
    return adj


def _quadratic_fits(vertices: np.ndarray, values: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    """Coefficients ``[nv, 6]`` of ``c0 + c1 x + c2 y + c3 x^2/2 + c4 x y + c5 y^2/2`` about each vertex."""
    adj = _adjacency(simplices, len(vertices))
    coef = np.zeros((len(vertices), 6))
    for v in range(len(vertices)):
        ring = set(adj[v])
        for nb in adj[v]:
            ring |= adj[nb]
        ring.discard(v)
        idx = np.array(sorted(ring | {v}))
        dx = vertices[idx] - vertices[v]
        scale = np.max(np.abs(dx)) or 1.0
        x, y = dx[:, 0] / scale, dx[:, 1] / scale
        V = np.stack([np.ones_like(x), x, y, 0.5 * x * x, x * y, 0.5 * y * y], axis=1)
        c = np.linalg.lstsq(V, values[idx], rcond=None)[0]
        coef[v] = c / np.array([1.0, scale, scale, scale**2, scale**2, scale**2])
    return coef


class FemField:
    """Recovered field of a :class:`BvpSolution` (ambient dimension 2)."""

    def __init__(self, solution: BvpSolution, name: str = "u_h"):
        self.solution = solution
        self.mesh = solution.mesh
        self.model = self.mesh.case.model
        self.name = name
        self._coef = _quadratic_fits(self.mesh.vertices, solution.nodal_values, self.mesh.simplices)
        tri = self.mesh.vertices[self.mesh.simplices]
        self._tree = cKDTree(tri.mean(axis=1))
        e1, e2 = tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]
        self._inv = np.linalg.inv(np.stack([e1, e2], axis=2))

    def locate(self, points: np.ndarray):
        """Triangle index and barycentric coordinates for each point."""
        p = np.atleast_2d(points)
        k = min(NEIGHBOURS, len(self.mesh.simplices))
        _, cand = self._tree.query(p, k=k)
        cand = cand.reshape(len(p), k)
        origin = self.mesh.vertices[self.mesh.simplices[cand, 0]]
        rel = np.einsum("bkij,bkj->bki", self._inv[cand], p[:, None, :] - origin)
        lam = np.concatenate([1.0 - rel.sum(axis=2, keepdims=True), rel], axis=2)
        best = np.argmax(lam.min(axis=2), axis=1)
        rows = np.arange(len(p))
        return cand[rows, best], lam[rows, best]

    def jet(self, points, order: int = 2) -> Jet:
        p = np.atleast_2d(np.asarray(points, float))
        tri, lam = self.locate(p)
        val = np.zeros(len(p))
        grad = np.zeros((len(p), 2))
        hess = np.zeros((len(p), 2, 2))
        for i in range(3):
            v = self.mesh.simplices[tri, i]
            c = self._coef[v]
            dx = p - self.mesh.vertices[v]
            x, y = dx[:, 0], dx[:, 1]
            q = c[:, 0] + c[:, 1] * x + c[:, 2] * y + 0.5 * c[:, 3] * x * x + c[:, 4] * x * y + 0.5 * c[:, 5] * y * y
            gx = c[:, 1] + c[:, 3] * x + c[:, 4] * y
            gy = c[:, 2] + c[:, 4] * x + c[:, 5] * y
            H = np.stack([np.stack([c[:, 3], c[:, 4]], 1), np.stack([c[:, 4], c[:, 5]], 1)], 1)
            li = lam[:, i]
            val += li * q
            grad += li[:, None] * np.stack([gx, gy], axis=1)
            hess += li[:, None, None] * H
        return Jet(val, grad, hess)

    def value(self, points) -> np.ndarray:
        return self.jet(points).val

    def p_laplacian(self, points) -> np.ndarray:
        """``Lap P_u`` through the Bochner form ``|Hess u - (Lap u / (n+1)) g|^2``.

        Third derivatives of a P1 solution are not available, so the form that
        holds for solutions of the equation is used.
        """
        p = np.atleast_2d(points)
        H = orthonormal(self.model, p, covariant_hessian(self.model, self, p))
        d = self.mesh.dim
        tr = np.trace(H, axis1=-2, axis2=-1)
        T = H - (tr / d)[:, None, None] * np.eye(d)
        return np.einsum("bij,bij->b", T, T)
