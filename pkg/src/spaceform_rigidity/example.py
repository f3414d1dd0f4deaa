"""Exact solution between two horospheres of the Poincare ball.

With ``0 < b < 1/2``:

* Sigma lies on ``L1: |x - E/2| = 1/2`` (Omega inside it),
* T lies on the support ``L2: |x + b E| = 1 - b`` (kappa = 1),
* ``u = (V3 - V1 - 1) / (n+1)`` solves ``Lap u - (n+1) u = 1`` with
  ``u = 0`` and ``d_nu u = 1/(n+1)`` on Sigma and the Robin condition
  ``d_N u = u + c~`` on T, ``c~ = (1 - 3b) / ((n+1)(1 - b))``,
* the contact angle obeys ``cos(theta) = -(1 - 3b)/(1 - b) = -c~ / c``.

The support data (``X, V, Y``) come from transporting the case-2 plane, and
the auxiliary function is anchored at the support point ``(1 - 2b) E``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .auxiliary import AuxFunction, make_aux
from .diffops import ScalarField
from .domain import CapDomain
from .errors import ConfigurationError
from .fields import UmbilicalCase, V1_formula, V3_formula, ball_horosphere_case
from .geometry import poincare_ball


@dataclass(frozen=True)
class HorosphereExample:
    b: float
    case: UmbilicalCase
    domain: CapDomain
    u: ScalarField
    c: float
    c_tilde: float

    @property
    def dim(self) -> int:
        return self.case.model.dim

    @property
    def cos_theta(self) -> float:
        return -(1.0 - 3.0 * self.b) / (1.0 - self.b)

    @property
    def theta(self) -> float:
        return math.acos(self.cos_theta)

    def aux(self, c_tilde: float | None = None) -> AuxFunction:
        return make_aux(self.case, self.c_tilde if c_tilde is None else c_tilde)


def exact_solution(dim: int = 2) -> ScalarField:
    n1 = float(dim)
    return ScalarField(poincare_ball(dim), lambda xs: (V3_formula(xs) - V1_formula(xs) - 1.0) / n1, "u_exact")


def horosphere_example(b: float, dim: int = 2) -> HorosphereExample:
    if not 0.0 < b < 0.5:
        raise ConfigurationError(f"b must lie in (0, 1/2), got {b!r}")
    case = ball_horosphere_case(-b, 1.0 - b, dim)
    center = np.zeros(dim)
    center[-1] = 0.5
    domain = CapDomain(case, center, 0.5)
    n1 = float(dim)
    return HorosphereExample(
        b=float(b),
        case=case,
        domain=domain,
        u=exact_solution(dim),
        c=1.0 / n1,
        c_tilde=(1.0 - 3.0 * b) / (n1 * (1.0 - b)),
    )
