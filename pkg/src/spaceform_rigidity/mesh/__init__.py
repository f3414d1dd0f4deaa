"""Meshing, P1 assembly and solution of the mixed boundary value problem (2D)."""
from .fem import BvpSolution, System, assemble, estimate_lambda1, l2_error, solve, solve_mesh
from .kernels import BACKEND
from .mesh import Mesh, generate_cap_domain, mesh_hierarchy, mesh_text, read_mesh, refine, write_mesh

__all__ = [
    "BACKEND",
    "BvpSolution",
    "Mesh",
    "System",
    "assemble",
    "estimate_lambda1",
    "generate_cap_domain",
    "l2_error",
    "mesh_hierarchy",
    "mesh_text",
    "read_mesh",
    "refine",
    "solve",
    "solve_mesh",
    "write_mesh",
]
