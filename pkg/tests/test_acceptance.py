"""Acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are also
repeated in the pytest terminal summary.
"""
from __future__ import annotations

import argparse
import math

import numpy as np
import pytest

from spaceform_rigidity.cli import DEFAULTS, full_report
from spaceform_rigidity.report import CheckRecord
from spaceform_rigidity.verify import suites as S

SEED = 20240601
SAMPLES = 1000


def _rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(SEED))


def _margin(r: CheckRecord) -> float:
    """Residual relative to its tolerance; inverted for negative controls."""
    if r.negative:
        return r.tolerance / r.residual if r.residual else math.inf
    return r.residual / r.tolerance if r.tolerance else r.residual


def _conclude(log, number: int, title: str, records) -> None:
    failed = [r for r in records if not r.passed]
    worst = max(records, key=lambda r: (not r.passed, _margin(r)))
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {number:2d}: {status}  {title} ({len(records)} checks; worst {worst.name} residual {worst.residual:.3e} tol {worst.tolerance:.1e})"
    print(line)
    log.append(line)
    assert not failed, [(r.name, r.inputs, r.residual, r.tolerance) for r in failed]


def test_criterion_01_field_identities(acceptance_log):
    rng = _rng()
    recs = []
    for dim in (2, 3):
        for case in S.default_cases(dim):
            recs += S.field_identity_suite(case, rng, SAMPLES, tol=1e-8)
    _conclude(acceptance_log, 1, "conformal Killing, Killing and potential identities", recs)


def test_criterion_02_auxiliary_function(acceptance_log):
    rng = _rng()
    recs = []
    for dim in (2, 3):
        for case in S.default_cases(dim):
            recs += S.aux_suite(case, S.C_TILDE_GRID, rng, SAMPLES, tol=1e-9)
    _conclude(acceptance_log, 2, "auxiliary function resolvent, Robin data and harmonic P", recs)


def test_criterion_03_isometry(acceptance_log):
    rng = _rng()
    recs = S.isometry_suite(rng, SAMPLES, 2) + S.isometry_suite(rng, SAMPLES, 3)
    _conclude(acceptance_log, 3, "half-space to ball isometry and image of L_alpha", recs)


def test_criterion_04_exact_example(acceptance_log):
    rng = _rng()
    recs = []
    for b in S.EXAMPLE_B:
        recs += [r for r in S.example_suite(b, rng, SAMPLES) if r.name != "boundary_hessian"]
    _conclude(acceptance_log, 4, "horosphere example PDE, boundary data and contact angle", recs)


def test_criterion_05_integral_identity(acceptance_log):
    recs = []
    for b in S.EXAMPLE_B:
        recs += S.identity_suite(b, levels=(1, 2, 3, 4), tol_lhs=1e-10, tol_rhs=1e-6, wronskian_tol=1e-8)
    _conclude(acceptance_log, 5, "integral identity over a in {-1, 0, c^2, 5} and the Sigma Wronskian", recs)


def test_criterion_06_boundary_hessian(acceptance_log):
    rng = _rng()
    recs = []
    for b in S.EXAMPLE_B:
        recs += [r for r in S.example_suite(b, rng, SAMPLES) if r.name == "boundary_hessian"]
    assert recs
    _conclude(acceptance_log, 6, "mixed Hessian along T vanishes", recs)


def test_criterion_07_minkowski_and_balance(acceptance_log):
    recs = []
    for case in S.default_cases(2):
        recs += S.cap_geometry_suite(case, (math.pi / 2, S.NON_ORTHOGONAL_ANGLE), level=4, tol=1e-6)
        recs += S.negative_control_suite(case, level=4, threshold=1e-3)
    for case in S.default_cases(3):
        recs += S.cap_geometry_suite(case, (math.pi / 2, S.NON_ORTHOGONAL_ANGLE), level=4, tol=1e-6)
    _conclude(acceptance_log, 7, "Minkowski formula and mean-curvature balance with negative controls", recs)


def test_criterion_08_solver_convergence(acceptance_log):
    recs = []
    for b in S.EXAMPLE_B:
        recs += S.solver_suite(b, levels=(1, 2, 3, 4), min_order=1.2)[0]
    _conclude(acceptance_log, 8, "L2 order and finest-level rigidity on the horosphere example", recs)


def test_criterion_09_coercivity(acceptance_log):
    recs = S.coercivity_suite(level=3)
    assert any(r.name == "coercivity.too_large" for r in recs)
    _conclude(acceptance_log, 9, "lambda_1,h > n+1 in the half ball and the over-large domain raises", recs)


def test_criterion_10_determinism(acceptance_log, tmp_path):
    cfg = argparse.Namespace(**{**DEFAULTS, "seed": SEED})
    first, table1 = full_report(cfg)
    second, table2 = full_report(cfg)
    a, b = first.to_jsonl(), second.to_jsonl()

    same = a.encode() == b.encode() and table1.encode() == table2.encode()
    rec = CheckRecord("determinism.bytes", {"seed": SEED, "records": len(first.records)}, len(a), len(b), 0.0 if same else 1.0, 0.0)
    _conclude(acceptance_log, 10, "two seeded full reports are byte-identical", [rec])
