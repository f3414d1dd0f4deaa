# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled P1 triangle loop; mirrors :func:`spaceform_rigidity.mesh.kernels.p1_triangles_numpy`."""
import numpy as np

# barycentric coordinates of the 3-point degree-2 rule (weights 1/3 each)
cdef double QB[3][3]
QB[0][:] = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]
QB[1][:] = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]
QB[2][:] = [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]


def p1_triangles(const double[:, ::1] verts, const long long[:, ::1] tris,
                 const double[:, ::1] w_stiff, const double[:, ::1] w_mass):
    """Per-element stiffness and mass blocks plus the load ``int phi_i w_mass``.

    Returns ``(rows, cols, stiff, mass, load)``; the first four hold 9 entries
    per triangle in element order, ``load`` is accumulated per vertex.
    """
    cdef Py_ssize_t nt = tris.shape[0], nv = verts.shape[0]
    rows_a = np.empty(9 * nt, dtype=np.int64)
    cols_a = np.empty(9 * nt, dtype=np.int64)
    stiff_a = np.empty(9 * nt)
    mass_a = np.empty(9 * nt)
    load_a = np.zeros(nv)
    cdef long long[::1] rows = rows_a
    cdef long long[::1] cols = cols_a
    cdef double[::1] stiff = stiff_a
    cdef double[::1] mass = mass_a
    cdef double[::1] load = load_a
    cdef Py_ssize_t e, i, j, q, k
    cdef long long v[3]
    cdef double gx[3]
    cdef double gy[3]
    cdef double x0, y0, x1, y1, x2, y2, det, area, wk, m
    for e in range(nt):
        for i in range(3):
            v[i] = tris[e, i]
        x0 = verts[v[0], 0]; y0 = verts[v[0], 1]
        x1 = verts[v[1], 0]; y1 = verts[v[1], 1]
        x2 = verts[v[2], 0]; y2 = verts[v[2], 1]
        det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        area = 0.5 * det
        gx[0] = (y1 - y2) / det; gy[0] = (x2 - x1) / det
        gx[1] = (y2 - y0) / det; gy[1] = (x0 - x2) / det
        gx[2] = (y0 - y1) / det; gy[2] = (x1 - x0) / det
        wk = (w_stiff[e, 0] + w_stiff[e, 1] + w_stiff[e, 2]) / 3.0
        for i in range(3):
            m = 0.0
            for q in range(3):
                m += w_mass[e, q] * QB[q][i]
            load[v[i]] += area * m / 3.0
            for j in range(3):
                k = 9 * e + 3 * i + j
                rows[k] = v[i]
                cols[k] = v[j]
                stiff[k] = area * wk * (gx[i] * gx[j] + gy[i] * gy[j])
                m = 0.0
                for q in range(3):
                    m += w_mass[e, q] * QB[q][i] * QB[q][j]
                mass[k] = area * m / 3.0
    return rows_a, cols_a, stiff_a, mass_a, load_a
