"""P1 Galerkin discretisation of the mixed Dirichlet-Robin problem

    Lap u + (n+1) K u = 1 in Omega,  u = 0 on Sigma,  d_N u = kappa u + c~ on T,

in conformal chart coordinates.  With ``w`` the conformal factor and ``d``
the ambient dimension the weak form reads

    A[u, v] = int w^(d-2) grad u . grad v - (n+1) K int u v w^d - kappa int_T u v w^(d-1)
    b[v]    = -int v w^d + c~ int_T v w^(d-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigvalsh_tridiagonal
from scipy.sparse.linalg import splu

from ..errors import CoercivityError, ConfigurationError, NumericalError
from .kernels import EDGE_T, EDGE_W, TRI_BARY, p1_triangles
from .mesh import Mesh

CG_RTOL = 1e-10
LAMBDA_MAX_STEPS = 10_000
LAMBDA_RTOL = 1e-12


@dataclass(frozen=True)
class System:
    """Assembled operators on all vertices plus the Sigma-zero restriction."""

    mesh: Mesh
    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    robin_mass: sp.csr_matrix
    load: np.ndarray
    robin_load: np.ndarray
    c_tilde: float
    free: np.ndarray
    matrix: sp.csr_matrix = field(repr=False, default=None)
    rhs: np.ndarray = field(repr=False, default=None)

    @property
    def K(self) -> float:
        return self.mesh.case.K

    @property
    def kappa(self) -> float:
        return self.mesh.case.kappa

    @property
    def n1(self) -> int:
        return self.mesh.dim

    def full_matrix(self) -> sp.csr_matrix:
        return (self.stiffness - self.n1 * self.K * self.mass - self.kappa * self.robin_mass).tocsr()

    def full_rhs(self) -> np.ndarray:
        return -self.load + self.c_tilde * self.robin_load


@dataclass(frozen=True)
class BvpSolution:
    mesh: Mesh
    nodal_values: np.ndarray
    K: float
    kappa: float
    c_tilde: float
    iterations: int
    galerkin_residual: float
    ritz_min: float


def quadrature_points(mesh: Mesh) -> np.ndarray:
    """Interior quadrature points ``[nt, 3, 2]`` of the 3-point rule."""
    v = mesh.vertices[mesh.simplices]
    return np.einsum("qi,eid->eqd", TRI_BARY, v)


def _edge_quadrature(mesh: Mesh, facets: np.ndarray):
    a, b = mesh.vertices[facets[:, 0]], mesh.vertices[facets[:, 1]]
    pts = a[:, None, :] + EDGE_T[None, :, None] * (b - a)[:, None, :]
    length = np.linalg.norm(b - a, axis=1)
    return pts, length


def _robin_blocks(mesh: Mesh):
    nv = len(mesh.vertices)
    facets = mesh.T_facets
    if len(facets) == 0:
        return sp.csr_matrix((nv, nv)), np.zeros(nv)
    pts, length = _edge_quadrature(mesh, facets)
    w = mesh.case.model.conformal_factor(pts.reshape(-1, mesh.dim)).reshape(pts.shape[:2]) ** (mesh.dim - 1)
    phi = np.stack([1.0 - EDGE_T, EDGE_T], axis=1)  # [q, local vertex]
    loc_m = np.einsum("fq,q,qi,qj->fij", w, EDGE_W, phi, phi) * length[:, None, None]
    loc_b = np.einsum("fq,q,qi->fi", w, EDGE_W, phi) * length[:, None]
    rows = np.repeat(facets, 2, axis=1).ravel()
    cols = np.tile(facets, (1, 2)).ravel()
    mass = sp.coo_matrix((loc_m.ravel(), (rows, cols)), shape=(nv, nv)).tocsr()
    load = np.zeros(nv)
    np.add.at(load, facets.ravel(), loc_b.ravel())
    return mass, load


def assemble_operators(mesh: Mesh):
    """Stiffness, conformal mass and volume load (``int phi_i w^d``) on all vertices."""
    if mesh.case is None:
        raise ConfigurationError("assembly needs a mesh tied to an umbilical case")
    d = mesh.dim
    q = quadrature_points(mesh)
    w = mesh.case.model.conformal_factor(q.reshape(-1, d)).reshape(q.shape[:2])
    rows, cols, s, m, load = p1_triangles(
        np.ascontiguousarray(mesh.vertices, dtype=float),
        np.ascontiguousarray(mesh.simplices, dtype=np.int64),
        np.ascontiguousarray(w ** (d - 2)),
        np.ascontiguousarray(w**d),
    )
    nv = len(mesh.vertices)
    S = sp.coo_matrix((s, (rows, cols)), shape=(nv, nv)).tocsr()
    M = sp.coo_matrix((m, (rows, cols)), shape=(nv, nv)).tocsr()
    return S, M, load


def assemble(mesh: Mesh, c_tilde: float) -> System:
    """System for ``u`` in the Sigma-zero trial space (Dirichlet rows eliminated)."""
    if len(mesh.sigma_facets) == 0:
        raise ConfigurationError("no Sigma facets: the Dirichlet set is empty and the problem is not coercive")
    S, M, load = assemble_operators(mesh)
    R, rload = _robin_blocks(mesh)
    free = np.setdiff1d(np.arange(len(mesh.vertices)), mesh.sigma_vertices)
    sys = System(mesh, S, M, R, load, rload, float(c_tilde), free)
    A = sys.full_matrix()[free][:, free].tocsr()
    # exact symmetry: round-off from the separate blocks is removed
    A = ((A + A.T) * 0.5).tocsr()
    return System(mesh, S, M, R, load, rload, float(c_tilde), free, A, sys.full_rhs()[free])


def _coercivity_message(system: System, detail: str) -> str:
    n1 = system.n1
    try:
        lam = f"; discrete lambda_1,h = {estimate_lambda1(system.mesh):.6g}"
    except NumericalError:
        lam = ""
    return (
        f"coercivity failure: {detail}; the weak form needs lambda_1(Omega) > (n+1)K = {n1 * system.K:g} "
        f"(first Dirichlet-Neumann eigenvalue bound){lam}"
    )


def pcg(A: sp.csr_matrix, b: np.ndarray, rtol: float = CG_RTOL, maxiter: int | None = None):
    """Jacobi-preconditioned CG that reports breakdown and the smallest Lanczos Ritz value.

    Returns ``(x, iterations, ritz_min, breakdown)``; ``breakdown`` is true when
    a search direction with ``p.A p <= 0`` appeared.
    """
    n = len(b)
    maxiter = maxiter or 10 * n + 100
    diag = A.diagonal()
    if np.any(diag <= 0):
        return np.zeros(n), 0, -np.inf, True
    dinv = 1.0 / diag
    x = np.zeros(n)
    r = b.copy()
    z = dinv * r
    p = z.copy()
    rz = r @ z
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return x, 0, np.nan, False
    alphas, betas = [], []
    it = 0
    for it in range(1, maxiter + 1):
        Ap = A @ p
        pAp = p @ Ap
        if pAp <= 0.0:
            return x, it, -np.inf, True
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        alphas.append(alpha)
        if np.linalg.norm(r) <= rtol * bnorm:
            break
        z = dinv * r
        rz_new = r @ z
        beta = rz_new / rz
        betas.append(beta)
        rz = rz_new
        p = z + beta * p
    else:
        raise NumericalError(f"CG did not reach relative residual {rtol:g} in {maxiter} steps")
    # Lanczos tridiagonal of the preconditioned operator from the CG coefficients
    a = np.asarray(alphas)
    bt = np.asarray(betas[: len(a) - 1])
    diag_T = 1.0 / a
    diag_T[1:] += bt / a[:-1]
    off = np.sqrt(bt) / a[:-1]
    ritz = eigvalsh_tridiagonal(diag_T, off, select="i", select_range=(0, 0))[0] if len(a) > 1 else diag_T[0]
    return x, it, float(ritz), False


def solve(system: System, rtol: float = CG_RTOL) -> BvpSolution:
    """CG solve; a non-positive-definite operator raises :class:`CoercivityError`."""
    A, b = system.matrix, system.rhs
    x, it, ritz, breakdown = pcg(A, b, rtol)
    if breakdown:
        raise CoercivityError(_coercivity_message(system, "CG met a direction with p.A p <= 0"))
    if ritz <= 0.0:
        raise CoercivityError(_coercivity_message(system, f"Lanczos estimate of the smallest eigenvalue is {ritz:.3e}"))
    u = np.zeros(len(system.mesh.vertices))
    u[system.free] = x
    galerkin = float(np.max(np.abs(A @ x - b))) if len(b) else 0.0
    return BvpSolution(system.mesh, u, system.K, system.kappa, system.c_tilde, it, galerkin, ritz)


def solve_mesh(mesh: Mesh, c_tilde: float) -> BvpSolution:
    return solve(assemble(mesh, c_tilde))


def estimate_lambda1(mesh: Mesh, max_steps: int = LAMBDA_MAX_STEPS, rtol: float = LAMBDA_RTOL) -> float:
    """Smallest eigenvalue of ``S x = lambda M x`` on the Sigma-zero space by inverse iteration."""
    if len(mesh.sigma_facets) == 0:
        raise ConfigurationError("no Sigma facets: lambda_1 needs a nonempty Dirichlet set")
    S, M, _ = assemble_operators(mesh)
    free = np.setdiff1d(np.arange(len(mesh.vertices)), mesh.sigma_vertices)
    S = S[free][:, free].tocsc()
    M = M[free][:, free].tocsr()
    lu = splu(S)
    x = np.ones(len(free))
    x /= math.sqrt(x @ (M @ x))
    lam = np.inf
    for _ in range(max_steps):
        y = lu.solve(M @ x)
        y /= math.sqrt(y @ (M @ y))
        lam_new = float(y @ (S @ y))
        x = y
        if abs(lam_new - lam) <= rtol * abs(lam_new):
            return lam_new
        lam = lam_new
    raise NumericalError(f"inverse iteration for lambda_1 did not converge in {max_steps} steps")


def l2_error(solution: BvpSolution, exact) -> float:
    """``L2(Omega, dvol)`` distance between the P1 solution and a closed form."""
    mesh = solution.mesh
    d = mesh.dim
    q = quadrature_points(mesh)
    pts = q.reshape(-1, d)
    w = mesh.case.model.conformal_factor(pts).reshape(q.shape[:2])
    uh = np.einsum("qi,ei->eq", TRI_BARY, solution.nodal_values[mesh.simplices])
    ue = exact.value(pts).reshape(q.shape[:2])
    err2 = np.sum(((uh - ue) ** 2 * w**d).sum(axis=1) / 3.0 * mesh.areas())
    return math.sqrt(float(err2))
