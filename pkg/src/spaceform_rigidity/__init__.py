"""Umbilical supports in space forms: fields, auxiliary functions, identities and a P1 solver.

Submodules
----------
geometry, jets, diffops
    Conformal charts, forward-mode jets and covariant operators.
fields, chartmaps, surfaces
    The four umbilical support cases with their fields ``X, V, Y``.
auxiliary, pfunction
    The auxiliary function ``phi`` and the P-function.
domain, example
    Cap domains with quadrature and the exact horosphere solution.
mesh
    Meshing, assembly, solve and ``lambda_1`` (2D).
verify
    Integral identities, boundary checks, rigidity detection and suites.
cli
    Command line front end.
"""
from .auxiliary import AuxFunction, make_aux, solve_c0
from .domain import CapDomain, PerturbedCap2D, cap_from_angle
from .errors import (
    CoercivityError,
    ConfigurationError,
    DomainError,
    InconsistencyError,
    NumericalError,
    PreconditionError,
    SpaceFormError,
)
from .example import horosphere_example
from .fields import CaseId, UmbilicalCase, make_case
from .geometry import SpaceFormModel, poincare_ball, stereographic_sphere, upper_half_space

__version__ = "0.1.0"

__all__ = [
    "AuxFunction",
    "CapDomain",
    "CaseId",
    "CoercivityError",
    "ConfigurationError",
    "DomainError",
    "InconsistencyError",
    "NumericalError",
    "PerturbedCap2D",
    "PreconditionError",
    "SpaceFormError",
    "SpaceFormModel",
    "UmbilicalCase",
    "cap_from_angle",
    "horosphere_example",
    "make_aux",
    "make_case",
    "poincare_ball",
    "solve_c0",
    "stereographic_sphere",
    "upper_half_space",
]
