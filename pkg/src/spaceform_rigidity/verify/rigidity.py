"""Detection of the overdetermined condition from a discrete solution.

Two reconstructions of ``d_nu u`` on Sigma are available:

* ``"flux"`` (default): the Galerkin residual at the Sigma vertices equals
  ``int_Sigma phi_i d_nu u dA``; a solve with the Sigma boundary mass matrix
  gives nodal values.  Second order on smooth data.
* ``"facet"``: gradient of the triangle adjacent to each Sigma facet,
  projected on the exact outward normal at the facet midpoint.  First order.

Statistics are weighted by conformal facet length.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from ..errors import ConfigurationError, InconsistencyError
from ..mesh.fem import assemble
from ..mesh.kernels import EDGE_T, EDGE_W
from ..report import CheckRecord
from .boundary import contact_angle

#: ``c_stddev / c_mean`` below this declares the overdetermined condition met
RIGIDITY_THRESHOLD = 0.05


@dataclass(frozen=True)
class RigidityReport:
    c_mean: float
    c_stddev: float
    inferred_principal_curvature: float
    predicted_angle: float
    measured_angle: float
    geometric_principal_curvature: float
    min_u: float
    threshold: float
    overdetermined: bool

    @property
    def relative_spread(self) -> float:
        return self.c_stddev / abs(self.c_mean) if self.c_mean != 0 else math.inf

    @property
    def message(self) -> str:
        return "overdetermined condition met" if self.overdetermined else "overdetermined condition not met"

    def records(self, tol_angle: float = math.radians(2.0), tol_rel: float = 0.02) -> list[CheckRecord]:
        inputs = {"c_mean": self.c_mean, "c_stddev": self.c_stddev, "min_u": self.min_u}
        k_err = abs(self.inferred_principal_curvature - self.geometric_principal_curvature)
        a_err = abs(self.predicted_angle - self.measured_angle)
        return [
            CheckRecord("rigidity.spread", inputs, self.relative_spread, 0.0, self.relative_spread, self.threshold, self.message),
            CheckRecord(
                "rigidity.curvature",
                inputs,
                self.inferred_principal_curvature,
                self.geometric_principal_curvature,
                k_err / abs(self.geometric_principal_curvature),
                tol_rel,
                "relative",
            ),
            CheckRecord("rigidity.angle", inputs, self.predicted_angle, self.measured_angle, a_err, tol_angle, "radians"),
        ]


def _facet_owner(simplices: np.ndarray, facets: np.ndarray) -> np.ndarray:
    """Index of the triangle containing each boundary facet."""
    owner = {}
    for e, tri in enumerate(simplices):
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            owner[(min(a, b), max(a, b))] = e
    return np.array([owner[(min(a, b), max(a, b))] for a, b in facets])


def triangle_gradients(mesh, values: np.ndarray) -> np.ndarray:
    """Constant flat gradient of the P1 interpolant on each triangle."""
    v = mesh.vertices[mesh.simplices]
    u = values[mesh.simplices]
    E = np.stack([v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]], axis=1)
    du = np.stack([u[:, 1] - u[:, 0], u[:, 2] - u[:, 0]], axis=1)
    return np.linalg.solve(E, du[..., None])[..., 0]


def _sigma_normals(mesh, mids: np.ndarray, facets: np.ndarray) -> np.ndarray:
    dom = mesh.domain
    if hasattr(dom, "sigma_flat_normal"):
        return dom.sigma_flat_normal(mids)
    # polygon normal, oriented away from the interior point
    t = mesh.vertices[facets[:, 1]] - mesh.vertices[facets[:, 0]]
    n = np.stack([t[:, 1], -t[:, 0]], axis=1)
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    flip = np.einsum("bi,bi->b", n, mids - dom.interior_point()) < 0
    n[flip] *= -1
    return n


def _facet_lengths(mesh, facets):
    a, b = mesh.vertices[facets[:, 0]], mesh.vertices[facets[:, 1]]
    mids = 0.5 * (a + b)
    w = mesh.case.model.conformal_factor(mids)
    return mids, w, np.linalg.norm(b - a, axis=1) * w ** (mesh.dim - 1)


def sigma_flux(solution):
    """``(d_nu u, conformal length)`` per Sigma facet from the consistent flux."""
    mesh = solution.mesh
    system = assemble(mesh, solution.c_tilde)
    residual = system.full_matrix() @ solution.nodal_values - system.full_rhs()
    facets = mesh.sigma_facets
    nodes = mesh.sigma_vertices
    local = np.searchsorted(nodes, facets)
    a, b = mesh.vertices[facets[:, 0]], mesh.vertices[facets[:, 1]]
    pts = a[:, None, :] + EDGE_T[None, :, None] * (b - a)[:, None, :]
    w = mesh.case.model.conformal_factor(pts.reshape(-1, mesh.dim)).reshape(pts.shape[:2]) ** (mesh.dim - 1)
    phi = np.stack([1.0 - EDGE_T, EDGE_T], axis=1)
    loc = np.einsum("fq,q,qi,qj->fij", w, EDGE_W, phi, phi) * np.linalg.norm(b - a, axis=1)[:, None, None]
    rows = np.repeat(local, 2, axis=1).ravel()
    cols = np.tile(local, (1, 2)).ravel()
    M = sp.coo_matrix((loc.ravel(), (rows, cols)), shape=(len(nodes), len(nodes))).tocsc()
    q = spsolve(M, residual[nodes])
    _, _, length = _facet_lengths(mesh, facets)
    return 0.5 * (q[local[:, 0]] + q[local[:, 1]]), length


def sigma_normal_derivative(solution):
    """``(d_nu u, conformal length)`` per Sigma facet from the adjacent triangle gradient."""
    mesh = solution.mesh
    facets = mesh.sigma_facets
    owner = _facet_owner(mesh.simplices, facets)
    grads = triangle_gradients(mesh, solution.nodal_values)[owner]
    mids, w, length = _facet_lengths(mesh, facets)
    n = _sigma_normals(mesh, mids, facets)
    return np.einsum("bi,bi->b", grads, n) / w, length


def _geometric_curvature(mesh) -> float:
    dom = mesh.domain
    q = dom.sigma(3)
    if q.extra is not None and "H" in q.extra:
        k = q.extra["H"]
    else:
        k = dom.sigma_principal_curvature(q.points)
    w = mesh.case.model.conformal_factor(q.points)
    dA = q.weights * w ** (mesh.dim - 1)
    return float(np.sum(k * dA) / np.sum(dA))


def rigidity_check(
    solution, aux=None, threshold: float = RIGIDITY_THRESHOLD, method: str = "flux"
) -> RigidityReport:
    """Statistics of ``d_nu u`` on Sigma and the curvature and angle they predict.

    ``aux`` is accepted for interface symmetry with the identity checks; the
    Robin constant is read from the solution.
    """
    mesh = solution.mesh
    if mesh.domain is None:
        raise ConfigurationError("rigidity_check needs a mesh that knows its continuous domain")
    if method == "flux":
        dnu, dA = sigma_flux(solution)
    elif method == "facet":
        dnu, dA = sigma_normal_derivative(solution)
    else:
        raise ConfigurationError(f"unknown normal-derivative method {method!r}")
    c_mean = float(np.sum(dnu * dA) / np.sum(dA))
    c_std = float(math.sqrt(np.sum((dnu - c_mean) ** 2 * dA) / np.sum(dA)))
    overdetermined = c_std < threshold * abs(c_mean)
    if c_mean <= 0.0 and overdetermined:
        raise InconsistencyError(f"d_nu u is nearly constant but c = {c_mean:.6g} <= 0, contradicting c > 0")
    n1 = mesh.dim
    c_tilde = solution.c_tilde if aux is None else aux.c_tilde
    ratio = -c_tilde / c_mean if c_mean != 0 else math.nan
    predicted = math.acos(ratio) if abs(ratio) <= 1.0 else math.nan
    measured = float(np.mean(contact_angle(mesh.case.model, mesh.domain.gamma(0))))
    return RigidityReport(
        c_mean=c_mean,
        c_stddev=c_std,
        inferred_principal_curvature=1.0 / (n1 * c_mean) if c_mean != 0 else math.nan,
        predicted_angle=predicted,
        measured_angle=measured,
        geometric_principal_curvature=_geometric_curvature(mesh),
        min_u=float(np.min(solution.nodal_values)),
        threshold=threshold,
        overdetermined=bool(overdetermined),
    )
