"""Time the compiled and NumPy P1 assembly kernels on the horosphere example meshes.

Usage: python3 benchmarks/bench_assembly.py [--levels 6] [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from spaceform_rigidity.example import horosphere_example
from spaceform_rigidity.mesh import kernels, mesh_hierarchy
from spaceform_rigidity.mesh.fem import quadrature_points


def _inputs(mesh):
    q = quadrature_points(mesh)
    w = mesh.case.model.conformal_factor(q.reshape(-1, 2)).reshape(q.shape[:2])
    return (
        np.ascontiguousarray(mesh.vertices, dtype=float),
        np.ascontiguousarray(mesh.simplices, dtype=np.int64),
        np.ascontiguousarray(np.ones_like(w)),
        np.ascontiguousarray(w**2),
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, default=6)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    try:
        from spaceform_rigidity.mesh._assembly import p1_triangles as compiled
    except ImportError:
        compiled = None
        print("compiled kernel not built; timing the NumPy kernel only")

    meshes = mesh_hierarchy(horosphere_example(1.0 / 3.0).domain, args.levels)
    print(f"{'level':>5} {'triangles':>10} {'numpy [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for mesh in meshes:
        data = _inputs(mesh)
        t_np = min(timeit.repeat(lambda: kernels.p1_triangles_numpy(*data), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{mesh.level:>5} {len(mesh.simplices):>10} {1e3 * t_np:>12.3f} {'-':>12} {'-':>8}")
            continue
        t_cy = min(timeit.repeat(lambda: compiled(*data), number=1, repeat=args.repeat))
        print(f"{mesh.level:>5} {len(mesh.simplices):>10} {1e3 * t_np:>12.3f} {1e3 * t_cy:>12.3f} {t_np / t_cy:>8.2f}")


if __name__ == "__main__":
    main()
