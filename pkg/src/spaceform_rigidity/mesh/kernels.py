"""Element kernels for P1 assembly.

The compiled extension ``_assembly`` is used when it was built; otherwise
the vectorised NumPy version below runs.  Set ``SPACEFORM_KERNEL=numpy`` to
force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

#: barycentric coordinates of the 3-point degree-2 triangle rule (weights 1/3)
TRI_BARY = np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]])
#: 2-point Gauss rule on ``[0, 1]``
EDGE_T = np.array([0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)])
EDGE_W = np.array([0.5, 0.5])


def p1_triangles_numpy(verts: np.ndarray, tris: np.ndarray, w_stiff: np.ndarray, w_mass: np.ndarray):
    """Vectorised twin of the compiled kernel (same outputs, same ordering)."""
    v = verts[tris]
    x, y = v[..., 0], v[..., 1]
    det = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    area = 0.5 * det
    gx = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1) / det[:, None]
    gy = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1) / det[:, None]
    wk = w_stiff.mean(axis=1)
    stiff = (area * wk)[:, None, None] * (gx[:, :, None] * gx[:, None, :] + gy[:, :, None] * gy[:, None, :])
    mass = np.einsum("eq,qi,qj->eij", w_mass, TRI_BARY, TRI_BARY) * (area / 3.0)[:, None, None]
    load_e = np.einsum("eq,qi->ei", w_mass, TRI_BARY) * (area / 3.0)[:, None]
    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    load = np.zeros(len(verts))
    # sequential accumulation in element order, like the compiled loop
    np.add.at(load, tris.ravel(), load_e.ravel())
    return rows, cols, stiff.ravel(), mass.ravel(), load


def _select():
    if os.environ.get("SPACEFORM_KERNEL", "").lower() == "numpy":
        return p1_triangles_numpy, "numpy"
    try:
        from ._assembly import p1_triangles
    except ImportError:
        return p1_triangles_numpy, "numpy"
    return p1_triangles, "cython"


p1_triangles, BACKEND = _select()
