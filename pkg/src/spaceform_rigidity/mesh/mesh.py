"""Triangle meshes of 2D cap domains.

The coarse mesh is built from concentric rings about ``domain.interior_point()``:
ring ``j`` of ``m`` carries ``8 j`` vertices obtained by scaling the boundary
curve towards the centre.  Refinement is uniform (red) with new boundary
vertices placed on the exact curves by parameter bisection, so every level
is nested in the chart except for the boundary snapping.

Boundary vertices carry a global curve parameter ``sigma in [0, 1)``: the
Sigma piece occupies ``[0, s_split]`` and T the rest, so both corners sit at
``sigma = 0`` and ``sigma = s_split``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ConfigurationError

#: flat area below which a triangle counts as degenerate
MIN_AREA = 1e-14
#: distance of T-vertices from the support surface
SURFACE_TOL = 1e-10
COARSE_RINGS = 2


@dataclass(frozen=True)
class Mesh:
    """Conforming triangle mesh of a cap domain.

    Attributes
    ----------
    vertices : (nv, 2) chart coordinates.
    simplices : (ns, 3) counter-clockwise vertex indices.
    boundary_facets : (nbf, 2) vertex indices of boundary edges.
    facet_tags : (nbf,) ``"S"`` (Sigma, Dirichlet) or ``"T"`` (support, Robin).
    case, domain : the umbilical case and the continuous domain meshed.
    boundary_param : global curve parameter per vertex (``nan`` off the boundary).
    """

    vertices: np.ndarray
    simplices: np.ndarray
    boundary_facets: np.ndarray
    facet_tags: np.ndarray
    case: object = None
    domain: object = None
    boundary_param: Optional[np.ndarray] = None
    level: int = 0
    _split: float = field(default=0.5, repr=False)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def sigma_facets(self) -> np.ndarray:
        return self.boundary_facets[self.facet_tags == "S"]

    @property
    def T_facets(self) -> np.ndarray:
        return self.boundary_facets[self.facet_tags == "T"]

    @property
    def sigma_vertices(self) -> np.ndarray:
        return np.unique(self.sigma_facets)

    @property
    def T_vertices(self) -> np.ndarray:
        return np.unique(self.T_facets)

    @property
    def corner_vertices(self) -> np.ndarray:
        """Gamma: vertices shared by a Sigma facet and a T facet."""
        return np.intersect1d(self.sigma_vertices, self.T_vertices)

    def areas(self) -> np.ndarray:
        v = self.vertices[self.simplices]
        e1, e2 = v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def h(self) -> float:
        """Longest edge length (flat)."""
        v = self.vertices[self.simplices]
        return float(max(np.linalg.norm(v[:, i] - v[:, (i + 1) % 3], axis=1).max() for i in range(3)))

    def validate(self) -> "Mesh":
        a = self.areas()
        if np.any(a <= MIN_AREA):
            raise ConfigurationError(f"mesh has {int(np.sum(a <= MIN_AREA))} degenerate or inverted triangles")
        if self.case is None:
            return self
        model = self.case.model
        if not np.all(model.inside(self.vertices, 0.0)):
            raise ConfigurationError("mesh vertices leave the chart")
        res = self.case.support.residual(self.vertices)
        on_T = self.T_vertices
        if np.any(np.abs(res[on_T]) > SURFACE_TOL):
            raise ConfigurationError("T vertices are not on the support surface")
        interior = np.setdiff1d(np.arange(len(self.vertices)), np.unique(self.boundary_facets))
        if np.any(res[interior] >= 0.0):
            raise ConfigurationError("interior mesh vertices lie outside B^int")
        return self


# -- boundary parametrisation -----------------------------------------------------


def _piece_length(curve, samples: int = 400) -> float:
    p = curve(np.linspace(0.0, 1.0, samples))
    return float(np.sum(np.linalg.norm(np.diff(p, axis=0), axis=1)))


class _BoundaryCurve:
    """Closed curve ``sigma -> x`` made of the Sigma and T pieces."""

    def __init__(self, pieces, n_edges: int):
        (tag_s, self.sigma_curve), (tag_t, self.t_curve) = pieces
        if (tag_s, tag_t) != ("S", "T"):
            raise ConfigurationError("boundary pieces must be ordered Sigma then T")
        ls, lt = _piece_length(self.sigma_curve), _piece_length(self.t_curve)
        ns = int(np.clip(round(n_edges * ls / (ls + lt)), 3, n_edges - 3))
        self.n_sigma_edges = ns
        self.split = ns / n_edges

    def __call__(self, sigma) -> np.ndarray:
        s = np.mod(np.atleast_1d(np.asarray(sigma, float)), 1.0)
        out = np.empty((len(s), 2))
        on_s = s <= self.split
        if np.any(on_s):
            out[on_s] = self.sigma_curve(s[on_s] / self.split)
        if np.any(~on_s):
            out[~on_s] = self.t_curve((s[~on_s] - self.split) / (1.0 - self.split))
        return out

    def tag(self, sigma_mid) -> np.ndarray:
        return np.where(np.mod(sigma_mid, 1.0) < self.split, "S", "T")


def _zip_rings(inner: list[int], inner_u: np.ndarray, outer: list[int], outer_u: np.ndarray) -> list[tuple]:
    """Triangulate the band between two closed rings ordered by parameter."""
    tris = []
    if len(inner) == 1:
        c = inner[0]
        for k in range(len(outer)):
            tris.append((c, outer[k], outer[(k + 1) % len(outer)]))
        return tris
    i = k = 0
    ni, no = len(inner), len(outer)
    while i < ni or k < no:
        ui = inner_u[(i + 1) % ni] + (1.0 if i + 1 >= ni else 0.0)
        uo = outer_u[(k + 1) % no] + (1.0 if k + 1 >= no else 0.0)
        if k < no and (i >= ni or uo <= ui):
            tris.append((inner[i % ni], outer[k % no], outer[(k + 1) % no]))
            k += 1
        else:
            tris.append((inner[i % ni], outer[k % no], inner[(i + 1) % ni]))
            i += 1
    return tris


def _coarse_mesh(domain, center: np.ndarray):
    n_edges = 8 * COARSE_RINGS
    curve = _BoundaryCurve(domain.boundary_pieces(), n_edges)
    verts = [center]
    params = [np.nan]
    rings = [[0]]
    ring_u = [np.zeros(1)]
    for j in range(1, COARSE_RINGS + 1):
        count = 8 * j
        # split = n_sigma / n_edges, so the outer ring hits both corners
        u = np.arange(count) / count
        sig = u
        pts = center + (j / COARSE_RINGS) * (curve(sig) - center)
        idx = list(range(len(verts), len(verts) + count))
        verts.extend(pts)
        params.extend(sig if j == COARSE_RINGS else np.full(count, np.nan))
        rings.append(idx)
        ring_u.append(u)
    tris = []
    for j in range(1, COARSE_RINGS + 1):
        tris += _zip_rings(rings[j - 1], ring_u[j - 1], rings[j], ring_u[j])
    outer = rings[-1]
    facets = np.array([(outer[k], outer[(k + 1) % len(outer)]) for k in range(len(outer))])
    sig = np.asarray(params)
    mids = _facet_mid_param(sig[facets[:, 0]], sig[facets[:, 1]])
    return np.asarray(verts), np.asarray(tris, dtype=np.int64), facets, curve.tag(mids), sig, curve


def _facet_mid_param(sa: np.ndarray, sb: np.ndarray) -> np.ndarray:
    sb = np.where(sb < sa, sb + 1.0, sb)
    return 0.5 * (sa + sb)


def _orient(vertices: np.ndarray, tris: np.ndarray) -> np.ndarray:
    v = vertices[tris]
    e1, e2 = v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]
    neg = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    tris = tris.copy()
    tris[neg] = tris[neg][:, [0, 2, 1]]
    return tris


def refine(mesh: Mesh, curve: "_BoundaryCurve") -> Mesh:
    """Red refinement: every triangle splits into four, boundary midpoints snap to the curve."""
    verts = [mesh.vertices]
    params = [mesh.boundary_param]
    edge_mid: dict[tuple[int, int], int] = {}
    nv = len(mesh.vertices)
    bmid = {}
    sig = mesh.boundary_param
    for a, b in mesh.boundary_facets:
        bmid[(min(a, b), max(a, b))] = float(_facet_mid_param(np.array([sig[a]]), np.array([sig[b]]))[0])

    new_pts, new_par = [], []

    def mid(a: int, b: int) -> int:
        key = (min(a, b), max(a, b))
        if key not in edge_mid:
            if key in bmid:
                s = bmid[key]
                new_pts.append(curve(s)[0])
                new_par.append(np.mod(s, 1.0))
            else:
                new_pts.append(0.5 * (mesh.vertices[a] + mesh.vertices[b]))
                new_par.append(np.nan)
            edge_mid[key] = nv + len(new_pts) - 1
        return edge_mid[key]

    tris = []
    for a, b, c in mesh.simplices:
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        tris += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    facets, tags = [], []
    for (a, b), t in zip(mesh.boundary_facets, mesh.facet_tags):
        m = edge_mid[(min(a, b), max(a, b))]
        facets += [(a, m), (m, b)]
        tags += [t, t]
    verts.append(np.asarray(new_pts).reshape(-1, 2))
    params.append(np.asarray(new_par))
    vertices = np.concatenate(verts)
    return Mesh(
        vertices,
        _orient(vertices, np.asarray(tris, dtype=np.int64)),
        np.asarray(facets, dtype=np.int64),
        np.asarray(tags),
        mesh.case,
        mesh.domain,
        np.concatenate(params),
        mesh.level + 1,
        mesh._split,
    ).validate()


def generate_cap_domain(domain, resolution: int = 0) -> Mesh:
    """Mesh a 2D cap domain; ``resolution`` counts uniform refinements of the coarse mesh.

    Each level multiplies the triangle count by four.
    """
    if getattr(domain, "dim", None) != 2:
        raise ConfigurationError("meshing is implemented for ambient dimension 2 only")
    if resolution < 0:
        raise ConfigurationError("resolution must be nonnegative")
    center = np.asarray(domain.interior_point(), float)
    if not np.all(domain.contains(center[None])):
        raise ConfigurationError("the domain centre is not inside the cap")
    verts, tris, facets, tags, sig, curve = _coarse_mesh(domain, center)
    mesh = Mesh(verts, _orient(verts, tris), facets, tags, domain.case, domain, sig, 0, curve.split).validate()
    for _ in range(resolution):
        mesh = refine(mesh, curve)
    return mesh


def mesh_hierarchy(domain, levels: int) -> list[Mesh]:
    """Meshes at resolutions ``0 .. levels - 1``."""
    out = [generate_cap_domain(domain, 0)]
    curve = _BoundaryCurve(domain.boundary_pieces(), 8 * COARSE_RINGS)
    for _ in range(1, levels):
        out.append(refine(out[-1], curve))
    return out


# -- text format -----------------------------------------------------------------


def mesh_text(mesh: Mesh) -> str:
    """``dim nv ns nbf`` header, then vertices, simplices and tagged boundary facets."""
    lines = [f"{mesh.dim} {len(mesh.vertices)} {len(mesh.simplices)} {len(mesh.boundary_facets)}"]
    lines += [" ".join(repr(float(c)) for c in v) for v in mesh.vertices]
    lines += [" ".join(str(int(i)) for i in s) for s in mesh.simplices]
    lines += [" ".join(str(int(i)) for i in f) + f" {t}" for f, t in zip(mesh.boundary_facets, mesh.facet_tags)]
    return "\n".join(lines) + "\n"


def write_mesh(mesh: Mesh, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(mesh_text(mesh))


def read_mesh(path, case=None, domain=None) -> Mesh:
    with open(path, encoding="utf-8") as fh:
        rows = [ln.split() for ln in fh if ln.strip()]
    dim, nv, ns, nbf = (int(x) for x in rows[0])
    body = rows[1:]
    if len(body) != nv + ns + nbf:
        raise ConfigurationError("mesh file length does not match its header")
    verts = np.array([[float(x) for x in r] for r in body[:nv]])
    simp = np.array([[int(x) for x in r] for r in body[nv : nv + ns]], dtype=np.int64)
    fac = body[nv + ns :]
    facets = np.array([[int(x) for x in r[:-1]] for r in fac], dtype=np.int64).reshape(-1, dim)
    tags = np.array([r[-1] for r in fac])
    if not set(tags) <= {"S", "T"}:
        raise ConfigurationError("boundary facet tags must be S or T")
    if verts.shape[1] != dim:
        raise ConfigurationError("vertex coordinates do not match the header dimension")
    return Mesh(verts, simp, facets, tags, case, domain).validate()
