"""Command line entry point.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
error, 3 numerical failure (including loss of coercivity).

Settings are read from an optional INI file (``--config``): the
``[DEFAULT]`` section and a section named after the subcommand supply
values for any flag not given on the command line.
"""
from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from typing import Sequence

import numpy as np

from .auxiliary import solve_c0
from .domain import CapDomain, cap_from_angle
from .errors import ConfigurationError, InconsistencyError, NumericalError, PreconditionError
from .example import horosphere_example
from .fields import CaseId, make_case
from .mesh import l2_error, mesh_hierarchy, solve_mesh, write_mesh
from .report import CheckRecord, VerificationReport, csv_text, write_csv
from .verify import check_divergence_formulas, check_minkowski, mean_curvature_balance
from .verify import suites as S
from .verify.rigidity import rigidity_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

#: fallback values for flags absent from both the command line and the config file
DEFAULTS = {
    "case": "all",
    "R": None,
    "alpha": None,
    "b": 1.0 / 3.0,
    "ctilde": None,
    "dim": 2,
    "levels": 4,
    "quad": 4,
    "seed": 20240601,
    "out": None,
    "tol": None,
    "a": None,
    "samples": 1000,
    "theta": math.pi / 2,
    "radius": S.CAP_RADIUS,
    "center": None,
}


class UsageError(ConfigurationError):
    pass


def _floats(text) -> list[float]:
    if text is None:
        return []
    if isinstance(text, (int, float)):
        return [float(text)]
    return [float(t) for t in str(text).replace(";", ",").split(",") if t.strip()]


def _cases(cfg) -> list[CaseId]:
    raw = str(cfg.case).strip().lower()
    if raw == "all":
        return list(CaseId)
    try:
        return [CaseId.parse(tok.strip()) for tok in raw.split(",") if tok.strip()]
    except (ValueError, KeyError) as exc:
        raise UsageError(f"unknown case {cfg.case!r}") from exc


def _case_objects(cfg):
    out = []
    for cid in _cases(cfg):
        param = S.DEFAULT_PARAMS[cid]
        if cid in (CaseId.GEODESIC_SPHERE_H, CaseId.GEODESIC_SPHERE_S) and cfg.R is not None:
            param = float(cfg.R)
        if cid is CaseId.EQUIDISTANT_H and cfg.alpha is not None:
            param = float(cfg.alpha)
        out.append(make_case(cid, param, dim=int(cfg.dim)))
    return out


def _rng(cfg) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(cfg.seed)))


def _retol(records: list[CheckRecord], tol) -> list[CheckRecord]:
    if tol is None:
        return records
    t = float(tol)
    return [r if r.negative else CheckRecord(r.name, r.inputs, r.lhs, r.rhs, r.residual, t, r.note) for r in records]


def _require_b(cfg) -> float:
    b = float(cfg.b)
    if not 0.0 < b < 0.5:
        raise UsageError(f"b must lie in (0, 1/2), got {b!r}")
    return b


def _emit(report: VerificationReport, cfg, out_file: str | None = None) -> int:
    print(report.table())
    path = out_file if out_file is not None else cfg.out
    if path:
        report.write_jsonl(path)
    return EXIT_OK if report.passed else EXIT_FAIL


# -- commands ------------------------------------------------------------------------


def cmd_verify_fields(cfg) -> int:
    rng = _rng(cfg)
    report = VerificationReport()
    for case in _case_objects(cfg):
        report.extend(_retol(S.field_identity_suite(case, rng, int(cfg.samples)), cfg.tol))
    report.extend(_retol(S.isometry_suite(rng, int(cfg.samples), int(cfg.dim)), cfg.tol))
    return _emit(report, cfg)


def cmd_verify_auxfn(cfg) -> int:
    grid = S.C_TILDE_GRID if cfg.ctilde is None else _floats(cfg.ctilde)
    if not grid:
        raise UsageError("the c~ grid is empty")
    rng = _rng(cfg)
    report = VerificationReport()
    for case in _case_objects(cfg):
        for ct in grid:
            print(f"{case.label} c~ = {ct:g}: c0 = {solve_c0(case, ct):.6f}")
        report.extend(_retol(S.aux_suite(case, grid, rng, int(cfg.samples)), cfg.tol))
    return _emit(report, cfg)


def cmd_run_example(cfg) -> int:
    b = _require_b(cfg)
    ex = horosphere_example(b, int(cfg.dim))
    print(f"b = {b:g}: c~ = {ex.c_tilde:.12g}, cos(theta) = {ex.cos_theta:.12g}, theta = {math.degrees(ex.theta):.6f} deg")
    report = VerificationReport(_retol(S.example_suite(b, _rng(cfg), int(cfg.samples), int(cfg.dim)), cfg.tol))
    return _emit(report, cfg)


def _solve_domain(cfg):
    """The horosphere example unless a case is named; returns ``(domain, c_tilde, exact or None)``."""
    if str(cfg.case).lower() in ("all", "example"):
        ex = horosphere_example(_require_b(cfg))
        ct = ex.c_tilde if cfg.ctilde is None else _floats(cfg.ctilde)[0]
        return ex.domain, ct, ex.u if ct == ex.c_tilde else None
    cases = _case_objects(cfg)
    if len(cases) != 1:
        raise UsageError("solve takes a single case")
    case = cases[0]
    ct = 0.0 if cfg.ctilde is None else _floats(cfg.ctilde)[0]
    if cfg.center is not None:
        dom = CapDomain(case, np.array(_floats(cfg.center)), float(cfg.radius), require_half_ball=False)
    else:
        dom = cap_from_angle(case, float(cfg.theta), float(cfg.radius))
    return dom, ct, None


def cmd_solve(cfg) -> int:
    if not cfg.out:
        raise UsageError("solve needs --out (output directory)")
    if int(cfg.dim) != 2:
        raise UsageError("the solver is implemented for ambient dimension 2")
    levels = int(cfg.levels)
    if levels < 1:
        raise UsageError("--levels must be at least 1")
    dom, ct, exact = _solve_domain(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    meshes = mesh_hierarchy(dom, levels + 1)[1:]
    rows, errors = [], []
    report = VerificationReport()
    sol = rep = None
    for mesh in meshes:
        write_mesh(mesh, os.path.join(cfg.out, f"mesh_level{mesh.level}.txt"))
        sol = solve_mesh(mesh, ct)
        err = l2_error(sol, exact) if exact is not None else math.nan
        errors.append(err)
        rep = rigidity_check(sol)
        rows.append((mesh.level, mesh.h(), err, rep.c_mean, rep.c_stddev, rep.measured_angle))
    write_csv(os.path.join(cfg.out, "convergence.csv"), ["level", "h", "l2_error", "c_mean", "c_stddev", "angle"], rows)
    write_csv(
        os.path.join(cfg.out, "solution.csv"),
        ["x", "y", "u"],
        [(float(v[0]), float(v[1]), float(u)) for v, u in zip(sol.mesh.vertices, sol.nodal_values)],
    )
    inputs = {"levels": levels, "c_tilde": ct}
    if exact is not None and len(errors) > 1:
        drops = [errors[i] - errors[i + 1] for i in range(len(errors) - 1)]
        report.add(CheckRecord("solve.error_monotone", {**inputs, "errors": errors}, errors[0], errors[-1], max(0.0, -min(drops)), 0.0))
    report.add(CheckRecord("solve.galerkin", inputs, sol.galerkin_residual, 0.0, sol.galerkin_residual, 1e-10))
    report.extend(rep.records())
    print(f"c = {rep.c_mean:.8g} (stddev {rep.c_stddev:.3g}): {rep.message}")
    return _emit(report, cfg, os.path.join(cfg.out, "report.jsonl"))


def cmd_check_identity(cfg) -> int:
    b = _require_b(cfg)
    L = int(cfg.quad)
    if L < 0:
        raise UsageError("--quad must be nonnegative")
    ex = horosphere_example(b)
    shift = 0.0 if cfg.ctilde is None else _floats(cfg.ctilde)[0] - ex.c_tilde
    a_values = None if cfg.a is None else _floats(cfg.a)
    levels = tuple(range(min(1, L), L + 1))
    report = VerificationReport(S.identity_suite(b, a_values, levels, c_tilde_shift=shift))
    # companion identities on the same domain and quadrature level
    report.extend(check_divergence_formulas(ex.case, ex.domain, L))
    report.add(check_minkowski(ex.case, ex.domain, ex.theta, L))
    report.add(mean_curvature_balance(ex.case, ex.domain, ex.theta, L))
    report = VerificationReport(_retol(report.records, cfg.tol))
    code = _emit(report, cfg)
    if code:
        print("warning: residual above tolerance", file=sys.stderr)
    return code


def full_report(cfg) -> tuple[VerificationReport, str]:
    """Every acceptance-level suite in a fixed order; returns the report and the convergence CSV."""
    rng = _rng(cfg)
    report = VerificationReport()
    cases = S.default_cases()
    for case in cases:
        report.extend(S.field_identity_suite(case, rng, int(cfg.samples)))
    for case in cases:
        report.extend(S.aux_suite(case, S.C_TILDE_GRID, rng, int(cfg.samples)))
    report.extend(S.isometry_suite(rng, int(cfg.samples)))
    for b in S.EXAMPLE_B:
        report.extend(S.example_suite(b, rng, int(cfg.samples)))
        report.extend(S.identity_suite(b))
    for case in cases:
        report.extend(S.cap_geometry_suite(case))
        report.extend(S.negative_control_suite(case))
    solver, rows = S.solver_suite(float(cfg.b))
    report.extend(solver)
    report.extend(S.coercivity_suite())
    table = csv_text(["level", "h", "l2_error", "c_mean", "c_stddev", "angle"], rows)
    return report, table


def cmd_report(cfg) -> int:
    report, table = full_report(cfg)
    if cfg.out:
        base, _ = os.path.splitext(cfg.out)
        with open(base + "_convergence.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(table)
    return _emit(report, cfg)


COMMANDS = {
    "verify-fields": cmd_verify_fields,
    "verify-auxfn": cmd_verify_auxfn,
    "run-example": cmd_run_example,
    "solve": cmd_solve,
    "check-identity": cmd_check_identity,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spaceform-rigidity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI file with [DEFAULT] and per-command sections")
        p.add_argument("--case", help="1-4, a case name, a comma list or 'all'")
        p.add_argument("--R", type=float, help="geodesic radius for cases 1 and 4")
        p.add_argument("--alpha", type=float, help="equidistant angle for case 2")
        p.add_argument("--b", type=float, help="horosphere example parameter in (0, 1/2)")
        p.add_argument("--ctilde", help="Robin constant (a comma list for verify-auxfn)")
        p.add_argument("--dim", type=int, help="ambient dimension n+1")
        p.add_argument("--levels", type=int, help="number of mesh refinement levels")
        p.add_argument("--quad", type=int, help="quadrature level")
        p.add_argument("--seed", type=int, help="seed of the counter-based generator")
        p.add_argument("--out", help="output file (directory for solve)")
        p.add_argument("--tol", type=float, help="override every tolerance")
        p.add_argument("--a", help="comma list of constants a for check-identity")
        p.add_argument("--samples", type=int, help="random samples per check")
        p.add_argument("--theta", type=float, help="contact angle of the cap for solve")
        p.add_argument("--radius", type=float, help="chart radius of the cap sphere for solve")
        p.add_argument("--center", help="explicit cap centre (comma list) for solve")
    return parser


def resolve_config(args: argparse.Namespace) -> argparse.Namespace:
    """Command line over config file over :data:`DEFAULTS`."""
    file_values: dict = {}
    if args.config:
        cp = configparser.ConfigParser()
        cp.optionxform = str
        if not cp.read(args.config):
            raise UsageError(f"cannot read config file {args.config!r}")
        section = cp[args.command] if cp.has_section(args.command) else cp[cp.default_section]
        file_values = dict(section)
    unknown = set(file_values) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    merged = {}
    for key, default in DEFAULTS.items():
        val = getattr(args, key, None)
        if val is None:
            val = file_values.get(key, default)
        merged[key] = val
    merged["command"] = args.command
    return argparse.Namespace(**merged)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[cfg.command](cfg)
    except (ConfigurationError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InconsistencyError as exc:
        print(f"inconsistent result: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
