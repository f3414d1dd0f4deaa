"""The four umbilical support hypersurfaces and their closed-form fields.

Each case carries a support ``S`` bounding ``B^int`` together with

* a conformal Killing field ``X`` with potential ``V`` (``L_X g = 2 V g``),
* the potential ``V`` itself (``Hess V = -K V g``, ``d_N V = kappa V`` on S),
* a Killing field ``Y``,
* the constant ``M`` with ``g(N, Y) = V / M`` on S.

==== ================= ============ ============== =========
case support          chart        kappa          M
==== ================= ============ ============== =========
1    geodesic sphere   ball         coth R         sinh R
2    equidistant L_a   half-space   cos a          -sec a
3    geodesic plane    ball         0              -1
4    geodesic sphere   stereograph. cot R          sin R
==== ================= ============ ============== =========

Case 2 can also be requested in the ball chart, where every field is the
push-forward through the half-space to ball isometry.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .chartmaps import ChartMap, dilation, halfspace_to_ball_map, reflection, transport_scalar, transport_vector
from .diffops import ScalarField, VectorField
from .errors import ConfigurationError, PreconditionError
from .geometry import Chart, SpaceFormModel, poincare_ball, stereographic_sphere, sum_squares, upper_half_space
from .surfaces import ChartHalfspace, ChartSphere, Support

#: chart-coordinate tolerance for "this point lies on the support"
SURFACE_TOL = 1e-10


class CaseId(enum.Enum):
    GEODESIC_SPHERE_H = 1
    EQUIDISTANT_H = 2
    GEODESIC_PLANE_H = 3
    GEODESIC_SPHERE_S = 4

    @classmethod
    def parse(cls, value) -> "CaseId":
        if isinstance(value, CaseId):
            return value
        if isinstance(value, (int, np.integer)) or (isinstance(value, str) and value.strip().isdigit()):
            try:
                return cls(int(value))
            except ValueError:
                pass
        else:
            key = str(value).strip().upper().replace("-", "_")
            aliases = {
                "GEODESICSPHEREH": "GEODESIC_SPHERE_H",
                "EQUIDISTANTH": "EQUIDISTANT_H",
                "GEODESICPLANEH": "GEODESIC_PLANE_H",
                "GEODESICSPHERES": "GEODESIC_SPHERE_S",
            }
            key = aliases.get(key.replace("_", ""), key)
            if key in cls.__members__:
                return cls[key]
        raise ConfigurationError(f"unknown case {value!r}; expected 1-4 or a case name")


@dataclass(frozen=True)
class UmbilicalCase:
    case_id: CaseId
    param: Optional[float]
    kappa: float
    minkowski_const: float
    model: SpaceFormModel
    support: Support
    X: VectorField
    V: ScalarField
    Y: VectorField
    chart_radius: Optional[float] = None
    half_ball: bool = False
    label: str = ""
    #: support point used as the base of the auxiliary function (case 2 family)
    anchor: Optional[np.ndarray] = None

    @property
    def K(self) -> int:
        return self.model.K

    @property
    def n(self) -> int:
        return self.model.n

    def __repr__(self):
        return f"UmbilicalCase({self.label}, kappa={self.kappa:.6g}, M={self.minkowski_const:.6g})"


@dataclass(frozen=True)
class SurfacePoint:
    point: np.ndarray
    normal: np.ndarray


# -- field formulas (component lists in, component lists out) -------------


def _sphere_X(xs, RR, sign):
    # sign = -1 in the ball chart, +1 in the stereographic chart
    c = 2.0 / (1.0 + sign * RR**2)
    xd = xs[-1]
    out = [c * xd * xi for xi in xs]
    out[-1] = out[-1] - c * (sum_squares(xs) + RR**2) / 2.0
    return out


def _Y_ball(xs):
    xd = xs[-1]
    out = [-xd * xi for xi in xs]
    out[-1] = out[-1] + (1.0 + sum_squares(xs)) / 2.0
    return out


def _Y_stereo(xs):
    xd = xs[-1]
    out = [xd * xi for xi in xs]
    out[-1] = out[-1] + (1.0 - sum_squares(xs)) / 2.0
    return out


def V1_formula(xs):
    return 2.0 * xs[-1] / (1.0 - sum_squares(xs))


def V3_formula(xs):
    sq = sum_squares(xs)
    return (1.0 + sq) / (1.0 - sq)


def V4_formula(xs):
    return 2.0 * xs[-1] / (1.0 + sum_squares(xs))


def chart_radius_h(R: float) -> float:
    return math.sqrt((math.cosh(R) - 1.0) / (math.cosh(R) + 1.0))


def chart_radius_s(R: float) -> float:
    return math.sqrt((1.0 - math.cos(R)) / (1.0 + math.cos(R)))


def _e_last(dim):
    e = np.zeros(dim)
    e[-1] = 1.0
    return e


def _geodesic_sphere_h(R: float, dim: int) -> UmbilicalCase:
    if not (R > 0 and math.isfinite(R)):
        raise ConfigurationError(f"case 1 needs R > 0, got {R!r}")
    model = poincare_ball(dim)
    RR = chart_radius_h(R)
    kappa = 1.0 / math.tanh(R)
    support = Support(model, ChartSphere(np.zeros(dim), RR), kappa, "geodesic sphere")
    return UmbilicalCase(
        CaseId.GEODESIC_SPHERE_H,
        float(R),
        kappa,
        math.sinh(R),
        model,
        support,
        VectorField(model, lambda xs: _sphere_X(xs, RR, -1.0), "X1"),
        ScalarField(model, V1_formula, "V1"),
        VectorField(model, _Y_ball, "Y1"),
        chart_radius=RR,
        half_ball=True,
        label=f"case1(R={R:g})",
    )


def _equidistant_halfspace(alpha: float, dim: int) -> UmbilicalCase:
    if not (0.0 <= alpha < math.pi / 2):
        raise ConfigurationError(f"case 2 needs alpha in [0, pi/2), got {alpha!r}")
    model = upper_half_space(dim)
    m = np.zeros(dim)
    m[0] += math.tan(alpha)
    m[-1] += 1.0
    kappa = math.cos(alpha)
    # sample the plane around its foot point above the axis
    window = {"half_width": 2.0, "center": _e_last(dim)}
    support = Support(model, ChartHalfspace(m, 1.0), kappa, "equidistant L_alpha", sample_window=window)

    def X2(xs):
        out = list(xs)
        out[-1] = out[-1] - 1.0
        return out

    return UmbilicalCase(
        CaseId.EQUIDISTANT_H,
        float(alpha),
        kappa,
        -1.0 / math.cos(alpha),
        model,
        support,
        VectorField(model, X2, "X2"),
        ScalarField(model, lambda xs: 1.0 / xs[-1], "V2"),
        VectorField(model, lambda xs: list(xs), "Y2"),
        label=f"case2(alpha={alpha:g})",
        anchor=_e_last(dim),
    )


def equidistant_ball_sphere(alpha: float, dim: int) -> ChartSphere:
    """Image of ``L_alpha`` in the ball chart."""
    c = np.zeros(dim)
    c[0] += math.tan(alpha) / 2.0
    c[-1] += 0.5
    return ChartSphere(c, 0.5 / math.cos(alpha))


def transport_case(case: UmbilicalCase, cmap: ChartMap, shape, label: str) -> UmbilicalCase:
    """Move a case through a chart isometry; ``shape`` is the image of the support.

    The image shape is supplied by the caller (for Mobius maps it is a
    closed-form sphere or plane); it is checked against the mapped points.
    """
    if cmap.source != case.model:
        raise ConfigurationError("chart map does not start at the case's chart")
    support = Support(cmap.target, shape, case.kappa, case.support.name)
    probe = case.support.sample(np.random.default_rng(0), 16, margin=0.05)
    image = cmap(probe)
    if np.max(np.abs(shape.residual(image))) > 1e-9:
        raise ConfigurationError("supplied image shape does not match the mapped support")
    inside = cmap(probe - 1e-3 * case.support.flat_normal(probe))
    if not np.all(shape.residual(inside) < 0):
        raise ConfigurationError("supplied image shape has the wrong interior side")
    return replace(
        case,
        model=cmap.target,
        support=support,
        X=transport_vector(case.X, cmap),
        V=transport_scalar(case.V, cmap),
        Y=transport_vector(case.Y, cmap),
        label=label,
        anchor=None if case.anchor is None else cmap(case.anchor)[0],
    )


def _geodesic_plane_h(dim: int) -> UmbilicalCase:
    model = poincare_ball(dim)
    support = Support(model, ChartHalfspace(_e_last(dim), 0.0), 0.0, "geodesic plane")
    return UmbilicalCase(
        CaseId.GEODESIC_PLANE_H,
        None,
        0.0,
        -1.0,
        model,
        support,
        VectorField(model, lambda xs: list(xs), "X3"),
        ScalarField(model, V3_formula, "V3"),
        VectorField(model, _Y_ball, "Y3"),
        label="case3",
    )


def _geodesic_sphere_s(R: float, dim: int) -> UmbilicalCase:
    if not (0.0 < R <= math.pi / 2):
        raise ConfigurationError(f"case 4 needs R in (0, pi/2], got {R!r}")
    model = stereographic_sphere(dim)
    RR = chart_radius_s(R)
    kappa = math.cos(R) / math.sin(R)
    if R == math.pi / 2:
        kappa = 0.0
    support = Support(model, ChartSphere(np.zeros(dim), RR), kappa, "geodesic sphere")
    return UmbilicalCase(
        CaseId.GEODESIC_SPHERE_S,
        float(R),
        kappa,
        math.sin(R),
        model,
        support,
        VectorField(model, lambda xs: _sphere_X(xs, RR, 1.0), "X4"),
        ScalarField(model, V4_formula, "V4"),
        VectorField(model, _Y_stereo, "Y4"),
        chart_radius=RR,
        half_ball=True,
        label=f"case4(R={R:g})",
    )


def make_case(case_id, param=None, dim: int = 2, chart: Optional[Chart | str] = None) -> UmbilicalCase:
    """Build one of the four support cases.

    ``param`` is R for cases 1 and 4, alpha for case 2 and ignored for
    case 3.  ``chart="ball"`` moves case 2 into the Poincare ball.
    """
    cid = CaseId.parse(case_id)
    if cid in (CaseId.GEODESIC_SPHERE_H, CaseId.GEODESIC_SPHERE_S, CaseId.EQUIDISTANT_H) and param is None:
        raise ConfigurationError(f"case {cid.value} needs a parameter")
    chart = Chart(chart) if isinstance(chart, str) else chart
    if cid is CaseId.GEODESIC_SPHERE_H:
        case = _geodesic_sphere_h(float(param), dim)
    elif cid is CaseId.EQUIDISTANT_H:
        case = _equidistant_halfspace(float(param), dim)
        if chart is Chart.POINCARE_BALL:
            case = transport_case(
                case,
                halfspace_to_ball_map(dim),
                equidistant_ball_sphere(float(param), dim),
                f"case2(alpha={float(param):g}, ball)",
            )
    elif cid is CaseId.GEODESIC_PLANE_H:
        case = _geodesic_plane_h(dim)
    else:
        case = _geodesic_sphere_s(float(param), dim)
    if chart is not None and case.model.chart is not chart:
        raise ConfigurationError(f"case {cid.value} is not available in the {chart.value} chart")
    return case


def ball_horosphere_case(center_height: float, radius: float, dim: int = 2) -> UmbilicalCase:
    """Horosphere ``|x - h E| = r`` of the ball tangent to the ideal boundary.

    Needs ``|h| + r = 1``.  Built by transporting the case-2 plane
    ``x_{n+1} = s`` through the half-space to ball map (followed by a flip
    of the last axis when the tangency point is the south pole).
    """
    h, r = float(center_height), float(radius)
    if not (0 < r < 1) or abs(abs(h) + r - 1.0) > 1e-12:
        raise ConfigurationError("a ball horosphere needs |center| + radius = 1 with 0 < radius < 1")
    base = _equidistant_halfspace(0.0, dim)
    s = 1.0 / r - 1.0
    hs = upper_half_space(dim)
    cmap = dilation(hs, s).then(halfspace_to_ball_map(dim))
    if h < 0:
        cmap = cmap.then(reflection(poincare_ball(dim), dim - 1))
    return transport_case(base, cmap, ChartSphere(h * _e_last(dim), r), f"horosphere(h={h:g}, r={r:g})")


# -- evaluation --------------------------------------------------------------


def eval_X(case: UmbilicalCase, p) -> np.ndarray:
    return case.X.value(case.model.check(np.atleast_2d(p)))


def eval_V(case: UmbilicalCase, p) -> np.ndarray:
    return case.V.value(case.model.check(np.atleast_2d(p)))


def eval_Y(case: UmbilicalCase, p) -> np.ndarray:
    return case.Y.value(case.model.check(np.atleast_2d(p)))


def surface_residual(case: UmbilicalCase, p) -> np.ndarray:
    """Signed chart residual: zero on S, negative in ``B^int``."""
    return case.support.residual(np.asarray(p, float))


def require_on_support(case: UmbilicalCase, p, tol: float = SURFACE_TOL) -> np.ndarray:
    x = case.model.check(np.atleast_2d(p))
    res = np.abs(surface_residual(case, x))
    if np.any(res > tol):
        raise PreconditionError(f"point(s) off the support surface (max residual {res.max():.3e})")
    return x


def support_normal(case: UmbilicalCase, p) -> SurfacePoint:
    """Unit normal of the support, pointing out of ``B^int``."""
    x = require_on_support(case, p)
    return SurfacePoint(x, case.support.normal(x))


def normal_potential_ratio(case: UmbilicalCase, p, tol: float = 1e-10) -> np.ndarray:
    """``g(N, Y)`` on the support; checked against ``V / M``."""
    sp = support_normal(case, p)
    w = case.model.conformal_factor(sp.point)
    lhs = w**2 * np.einsum("bi,bi->b", sp.normal, eval_Y(case, sp.point))
    rhs = eval_V(case, sp.point) / case.minkowski_const
    err = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))
    if np.any(err > tol):
        raise PreconditionError(f"g(N, Y) differs from V/M by {err.max():.3e}")
    return lhs


# -- sampling ------------------------------------------------------------------


def sample_interior(
    case: UmbilicalCase, rng: np.random.Generator, count: int, margin: float = 0.05, half_ball: bool = False
) -> np.ndarray:
    """Random points of ``B^int`` at least ``margin`` inside the chart."""
    model, d = case.model, case.model.dim
    out, have = [], 0
    for _ in range(500):
        if model.chart is Chart.POINCARE_BALL:
            cand = rng.uniform(-1.0, 1.0, size=(4 * count, d))
        elif model.chart is Chart.UPPER_HALF_SPACE:
            cand = rng.uniform(-2.0, 2.0, size=(4 * count, d))
            cand[:, -1] = rng.uniform(0.0, 4.0, size=4 * count)
        else:
            cand = rng.uniform(-1.5, 1.5, size=(4 * count, d))
        ok = model.inside(cand, margin) & case.support.contains(cand, tol=margin * 0.1)
        if half_ball:
            ok &= cand[:, -1] > margin
        out.append(cand[ok])
        have += int(ok.sum())
        if have >= count:
            break
    pts = np.concatenate(out)[:count]
    if len(pts) < count:
        raise ConfigurationError(f"could not sample {count} interior points for {case.label}")
    return pts


def sample_support(case: UmbilicalCase, rng: np.random.Generator, count: int, margin: float = 0.05) -> np.ndarray:
    return case.support.sample(rng, count, margin=margin)
