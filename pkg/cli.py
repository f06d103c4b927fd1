#!/usr/bin/env python3
"""
Command-line front end.

    python cli.py tabulate --family kravchuk --p 1/2 --N 4 --nmax 4
    python cli.py check certify --family meixner --gamma 2 --mu 1/3 --nmax 10
    python cli.py limits meixner-laguerre --n 1 --alpha 0 --h 0.1,0.05,0.025,0.0125

Data goes to stdout (or --out), logs to stderr. Exit codes: 0 success,
1 failed check or non-monotone schedule, 2 usage error, 3 output error.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import re
import sys
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from config import RunConfig, ToleranceConfig
from exact_oracle import certify_family, float_drift
from family_catalog import (
    DegenerateParameterError,
    FamilyName,
    FamilySpec,
    IndexRangeError,
    InvalidParameterError,
    OutsideSupportError,
    family_descriptor,
    make_family,
    parse_number,
    pearson_residual,
    squared_norm,
)
from ladder_algebra import Operator, build_by_ladder, closure_report, export_matrix, ladder_matrix
from limit_lab import LimitKind, LimitSchedule, Variant, run_schedule, schedule_rows
from normalized_functions import (
    Relation,
    WignerIndex,
    hydrogen_orthogonality,
    hydrogen_residual,
    kravchuk_nd_residual,
    meixner_nd_residual,
    nc_residual,
    nd_residual,
    normalized_state,
    tabulate_psi,
    tabulate_wigner,
    wigner_d,
    wigner_matrix,
)
from poly_engine import build_by_recurrence, equation_residual, export_poly_seq, orthogonality_matrix, poly_table_rows
from rational_poly import format_number
from report_models import CheckResult, CheckSuiteReport, TableExport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

POLY_FAMILIES = [name.value for name in FamilyName]
WIGNER = "wigner"
SUITES = ["residuals", "orthogonality", "commutators", "certify", "wigner", "hydrogen", "drift"]

DEFAULT_BETAS = "0.3,0.7,1.1,1.5,1.9,2.3,2.7"
HYDROGEN_STATES = [(1, 0), (2, 0), (2, 1), (3, 1)]
# roles: results tagged "reported" document a printed form and do not gate the exit code
REPORTED = {"role": "reported"}


# --- argument parsing ------------------------------------------------------------


def cli_number(text: str):
    """"num/den" and integers are exact; decimals stay floats."""
    text = str(text).strip()
    if "/" in text or re.fullmatch(r"[+-]?\d+", text):
        return parse_number(text)
    try:
        return float(text)
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse number {text!r}") from exc


def parse_grid(text: str) -> list[float]:
    """"start:stop:step" inclusive of stop, computed in rationals so the points are reproducible."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"cannot parse grid {text!r}") from exc
    if step <= 0 or stop < start:
        raise InvalidParameterError(f"grid {text!r} is empty")
    count = int((stop - start) / step) + 1
    return [float(start + k * step) for k in range(count)]


def parse_range(text: str) -> list[int]:
    """"first:last" integer range, inclusive."""
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidParameterError(f"points must be first:last, got {text!r}")
    try:
        first, last = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse points {text!r}") from exc
    if last < first:
        raise InvalidParameterError(f"points range {text!r} is empty")
    return list(range(first, last + 1))


def parse_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def family_params(args: argparse.Namespace) -> dict:
    name = FamilyName(args.family)
    wanted = {
        FamilyName.HERMITE: [],
        FamilyName.LAGUERRE: ["alpha"],
        FamilyName.KRAVCHUK: ["p", "N"],
        FamilyName.MEIXNER: ["gamma", "mu"],
    }[name]
    params = {}
    for key in wanted:
        raw = getattr(args, key)
        if raw is None:
            raise InvalidParameterError(f"--{key} is required for {name.value}")
        params[key] = cli_number(raw)
    return params


def family_from_args(args: argparse.Namespace) -> FamilySpec:
    if args.family not in POLY_FAMILIES:
        raise InvalidParameterError(f"{args.family} is not a polynomial family")
    return make_family(args.family, family_params(args))


def family_points(spec: FamilySpec, args: argparse.Namespace, continuous_default: dict[str, str], discrete_default: str = "0:20") -> list:
    if spec.is_discrete:
        if args.points:
            points = parse_range(args.points)
        elif spec.name is FamilyName.KRAVCHUK:
            points = list(range(spec.param("N") + 1))
        else:
            points = parse_range(discrete_default)
        for point in points:
            if not spec.support.contains(point):
                raise OutsideSupportError(f"{point} is outside the support {spec.support.describe()}")
        return points
    return parse_grid(args.grid or continuous_default[spec.name.value])


def index_limit(spec: FamilySpec, requested: int) -> int:
    return requested if spec.max_index is None else min(requested, spec.max_index)


def half_integers(j_max: Fraction) -> list[Fraction]:
    return [Fraction(k, 2) for k in range(1, int(2 * j_max) + 1)]


# --- output ----------------------------------------------------------------------


def format_value(value, float_format: str) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, float_format)
    if isinstance(value, Fraction):
        return format_number(value)
    if value is None:
        return ""
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str], float_format: str) -> str:
    buffer = io.StringIO()
    for line in comments:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v, float_format) for v in row])
    return buffer.getvalue()


def write_output(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def tolerance_comment(defaults: ToleranceConfig) -> str:
    return "default tolerances: " + ", ".join(f"{k}={v:g}" for k, v in defaults.as_dict().items())


# --- check helpers ---------------------------------------------------------------


def check_result(
    name: str,
    errors: Iterable[tuple[str, float]],
    tolerance: float,
    detail: Optional[dict] = None,
) -> CheckResult:
    worst, first = 0.0, None
    for label, value in errors:
        value = abs(float(value))
        if math.isnan(value):
            value = math.inf
        worst = max(worst, value)
        if first is None and value > tolerance:
            first = label
    return CheckResult(
        name=name,
        passed=first is None,
        max_error=worst,
        tolerance=tolerance,
        first_failure=first,
        detail=dict(detail or {}),
    )


def _poly_scale(poly) -> float:
    return max((abs(float(c)) for c in poly.coeffs), default=0.0)


def _equation_scale(poly, point, n: int) -> float:
    return max(1.0, _poly_scale(poly)) * (1.0 + abs(float(point))) ** n


def suite_residuals(args, tolerances: ToleranceConfig) -> list[CheckResult]:
    spec = family_from_args(args)
    n_max = index_limit(spec, args.nmax)
    tol = tolerances.residual
    seq = build_by_recurrence(spec, n_max)
    points = family_points(spec, args, {"hermite": "-8:8:0.5", "laguerre": "0.5:30:0.5"})
    results = [
        check_result(
            "D1" if spec.is_discrete else "C1",
            (
                (f"n={n} x={p}", equation_residual(spec, seq, n, p) / _equation_scale(seq.polys[n], p, n))
                for n in range(n_max + 1)
                for p in points
            ),
            tol,
        ),
        check_result("pearson", ((f"x={p}", pearson_residual(spec, p)) for p in points), tol),
    ]
    if spec.name is FamilyName.KRAVCHUK:
        N, p = spec.param("N"), float(spec.param("p"))
        for relation in (Relation.ND1, Relation.ND2, Relation.ND3, Relation.ND4):
            results.append(
                check_result(
                    relation.value,
                    (
                        (f"n={n} x={x}", kravchuk_nd_residual(relation, n, x, N, p))
                        for n in range(n_max + 1)
                        for x in points
                    ),
                    tol,
                )
            )
        return results
    if spec.name is FamilyName.MEIXNER:
        g, mu = spec.param("gamma"), spec.param("mu")
        for relation in (Relation.ND1, Relation.ND2, Relation.ND3, Relation.ND4):
            results.append(
                check_result(
                    relation.value,
                    ((f"n={n} x={x}", meixner_nd_residual(relation, n, x, g, mu)) for n in range(n_max + 1) for x in points),
                    tol,
                )
            )
        return results
    relations = [Relation.NC1, Relation.NC2, Relation.NC3, Relation.NC4]
    if spec.name is FamilyName.LAGUERRE:
        relations.append(Relation.NC1_PRINTED)
    for relation in relations:
        results.append(
            check_result(
                relation.value,
                ((f"n={n} s={s:g}", nc_residual(spec, relation, n, s)) for n in range(n_max + 1) for s in points),
                tol,
                REPORTED if relation is Relation.NC1_PRINTED else None,
            )
        )
    return results


def suite_orthogonality(args, tolerances: ToleranceConfig) -> list[CheckResult]:
    spec = family_from_args(args)
    n_max = index_limit(spec, args.nmax)
    gram = orthogonality_matrix(spec, n_max, tail=tolerances.meixner_tail)
    tol = tolerances.quadrature if gram.method == "gauss-quadrature" else tolerances.residual
    matrix = gram.as_array()
    diag = [float(squared_norm(spec, n)) for n in range(n_max + 1)]
    detail = {"method": gram.method, "exact": str(gram.exact).lower()}
    if gram.tail_index is not None:
        detail["tail_index"] = str(gram.tail_index)
    off = (
        (f"n={n} m={m}", matrix[n, m] / math.sqrt(diag[n] * diag[m]))
        for n in range(n_max + 1)
        for m in range(n_max + 1)
        if m != n
    )
    norms = ((f"n={n}", matrix[n, n] / diag[n] - 1.0) for n in range(n_max + 1))
    return [check_result("gram_off_diagonal", off, tol, detail), check_result("squared_norm", norms, tol, detail)]


def suite_commutators(args, tolerances: ToleranceConfig) -> tuple[list[CheckResult], list, list]:
    if args.family in (WIGNER, FamilyName.KRAVCHUK.value):
        j = Fraction(cli_number(args.j or "1"))
        family, dim, params = WIGNER, int(2 * j) + 1, {}
    else:
        spec = family_from_args(args)
        family, dim, params = spec.name.value, args.dim, family_params(args)
    report = closure_report(family, dim, params, tolerance=tolerances.commutator)
    results = []
    for relation in report.relations:
        results.append(
            CheckResult(
                name=relation.relation,
                passed=relation.closes,
                max_error=relation.measured_residual,
                tolerance=tolerances.commutator,
                first_failure=None if relation.closes else relation.relation,
                detail={
                    "printed_constant": format(relation.printed_constant, ".17g"),
                    "measured_constant": format(relation.measured_constant, ".17g"),
                    "matches_printed": str(relation.matches_printed).lower(),
                },
            )
        )
    raise_m = ladder_matrix(family, Operator.RAISE, dim, params)
    lower_m = ladder_matrix(family, Operator.LOWER, dim, params)
    matrices = [export_matrix(m) for m in (raise_m, lower_m, ladder_matrix(family, Operator.DIAGONAL, dim, params))]
    results.append(check_result("adjoint", [("A-", float(abs(lower_m.entries - raise_m.entries.T).max()))], 1e-14))
    if family != WIGNER:
        spec = family_from_args(args)
        points = family_points(spec, args, {"hermite": "-6:6:0.5", "laguerre": "0.5:20:0.5"})
        errors = []
        for n in range(index_limit(spec, args.nmax) + 1):
            state = build_by_ladder(spec, n, points, tolerance=tolerances.ladder)
            direct = normalized_state(spec, n, points, tolerance=tolerances.ladder)
            if not (state.norm_checked and direct.norm_checked):
                errors.append((f"n={n} norm", math.inf))
            errors.extend((f"n={n} x={p}", state.values[p] - direct.values[p]) for p in points)
        results.append(check_result("ladder_route", errors, tolerances.ladder))
    return results, [report], matrices


def suite_certify(args, tolerances: ToleranceConfig) -> tuple[list[CheckResult], list]:
    spec = family_from_args(args)
    report = certify_family(spec, index_limit(spec, args.nmax), tolerances=tolerances)
    failure = report.first_failure()
    summary = CheckResult(
        name="certify",
        passed=report.passed,
        first_failure=failure.first_failure if failure else None,
        detail={"mode": "exact" if spec.exact else "float"},
    )
    return [summary], [report]


def suite_wigner(args, tolerances: ToleranceConfig) -> list[CheckResult]:
    j_max = Fraction(cli_number(args.j or "6"))
    betas = [float(b) for b in parse_list(args.beta or DEFAULT_BETAS)]
    duality, unitarity, closed = [], [], []
    residuals: dict[str, list] = {r: [] for r in ("ND1", "ND2", "ND3", "ND4", "ND2_PRINTED")}
    for j in half_integers(j_max):
        ms = [j - k for k in range(int(2 * j) + 1)]
        for beta in betas:
            matrix = wigner_matrix(j, beta)
            for k, row in enumerate(matrix @ matrix.T):
                unitarity.append((f"j={j} m={ms[k]} beta={beta:g}", max(abs(v - (i == k)) for i, v in enumerate(row))))
            for m in ms:
                for mp in ms:
                    idx = WignerIndex(j, m, mp, beta)
                    value = wigner_d(idx)
                    sign = -1.0 if (m - mp) % 2 else 1.0
                    label = f"j={j} m={m} m'={mp} beta={beta:g}"
                    duality.append((label, value - sign * wigner_d(WignerIndex(j, mp, m, beta))))
                    for relation in (Relation.ND1, Relation.ND2, Relation.ND3, Relation.ND4):
                        residuals[relation.value].append((label, nd_residual(relation, idx)))
                    residuals["ND2_PRINTED"].append((label, nd_residual(Relation.ND2, idx, reading="printed")))
            if j == Fraction(1, 2):
                c, s = math.cos(beta / 2), math.sin(beta / 2)
                expected = {(1, 1): c, (1, -1): -s, (-1, 1): s, (-1, -1): c}
                for (a, b), value in expected.items():
                    idx = WignerIndex(j, Fraction(a, 2), Fraction(b, 2), beta)
                    closed.append((f"m={a}/2 m'={b}/2 beta={beta:g}", wigner_d(idx) - value))
    results = [
        check_result("duality", duality, tolerances.duality),
        check_result("row_unitarity", unitarity, tolerances.unitarity),
    ]
    for name in ("ND1", "ND2", "ND3", "ND4"):
        results.append(check_result(name, residuals[name], tolerances.residual))
    results.append(check_result("ND2_PRINTED", residuals["ND2_PRINTED"], tolerances.residual, REPORTED))
    if closed:
        results.append(check_result("closed_form_j1/2", closed, tolerances.duality))
    return results


def suite_hydrogen(args, tolerances: ToleranceConfig) -> list[CheckResult]:
    grid = parse_grid(args.grid or "0.1:30:0.1")
    results = [
        check_result(
            "hydrogen_equation",
            ((f"n={n} l={l} s={s:g}", hydrogen_residual(n, l, s)) for n, l in HYDROGEN_STATES for s in grid),
            tolerances.residual,
        )
    ]
    off = []
    for l in sorted({l for _, l in HYDROGEN_STATES}):
        ns = [n for n, ll in HYDROGEN_STATES if ll == l]
        gram = hydrogen_orthogonality(l, ns)
        off.extend((f"l={l} n={a} n'={b}", gram[i, k]) for i, a in enumerate(ns) for k, b in enumerate(ns) if i != k)
    results.append(check_result("hydrogen_orthogonality", off, tolerances.quadrature))
    return results


def suite_drift(args, tolerances: ToleranceConfig) -> list[CheckResult]:
    spec = family_from_args(args)
    points = family_points(spec, args, {"hermite": "-10:10:0.5", "laguerre": "0.5:10:0.5"}, discrete_default="0:40")
    report = float_drift(spec, index_limit(spec, args.nmax), points, tolerance=tolerances.drift)
    return [
        CheckResult(
            name="float_drift",
            passed=report.passed,
            max_error=report.max_relative_drift,
            tolerance=report.tolerance,
            first_failure=None if report.passed else f"n={report.worst_index} x={report.worst_point}",
        )
    ]


def run_check(args, tolerances: ToleranceConfig) -> CheckSuiteReport:
    certificates, closures, matrices = [], [], []
    if args.suite == "residuals":
        results = suite_residuals(args, tolerances)
    elif args.suite == "orthogonality":
        results = suite_orthogonality(args, tolerances)
    elif args.suite == "commutators":
        results, closures, matrices = suite_commutators(args, tolerances)
    elif args.suite == "certify":
        results, certificates = suite_certify(args, tolerances)
    elif args.suite == "wigner":
        results = suite_wigner(args, tolerances)
    elif args.suite == "hydrogen":
        results = suite_hydrogen(args, tolerances)
    else:
        results = suite_drift(args, tolerances)
    gating = [r for r in results if r.detail.get("role") != "reported"]
    return CheckSuiteReport(
        suite=args.suite,
        family=None if args.suite in ("wigner", "hydrogen") else args.family,
        passed=all(r.passed for r in gating),
        tolerances=tolerances.as_dict(),
        default_tolerances=ToleranceConfig.defaults().as_dict(),
        results=results,
        certificates=certificates,
        closures=closures,
        matrices=matrices,
    )


# --- commands --------------------------------------------------------------------


def cmd_tabulate(args, tolerances: ToleranceConfig, run: RunConfig) -> int:
    if args.family == WIGNER:
        j = cli_number(args.j or "1")
        betas = [float(b) for b in parse_list(args.beta or DEFAULT_BETAS)]
        columns = ["j", "m", "m'", "beta", "value"]
        rows = [list(row) for row in tabulate_wigner(j, betas)]
        descriptor, sequence = None, None
    else:
        spec = family_from_args(args)
        points = family_points(spec, args, {"hermite": "-4:4:0.5", "laguerre": "0.5:10:0.5"})
        seq = build_by_recurrence(spec, index_limit(spec, args.nmax))
        columns = ["family", "n", "point", "P_value", "psi_value"]
        # both helpers emit rows in index-major order over the same points
        rows = [
            [name, n, float(point), value, psi_row[3]]
            for (name, n, point, value), psi_row in zip(poly_table_rows(seq, points), tabulate_psi(spec, seq.max_degree, points))
        ]
        descriptor, sequence = family_descriptor(spec), export_poly_seq(seq)
    if args.format == "json":
        text = TableExport(kind="tabulate", family=descriptor, columns=columns, rows=rows, sequence=sequence).model_dump_json(indent=2) + "\n"
    else:
        comments = [f"columns: {','.join(columns)}", tolerance_comment(ToleranceConfig.defaults())]
        text = render_csv(columns, rows, comments, run.float_format)
    write_output(text, args.out)
    return EXIT_OK


def cmd_check(args, tolerances: ToleranceConfig, run: RunConfig) -> int:
    report = run_check(args, tolerances)
    if args.format == "csv":
        columns = ["name", "passed", "max_error", "tolerance", "first_failure"]
        rows = [[r.name, r.passed, r.max_error, r.tolerance, r.first_failure] for r in report.results]
        comments = [f"suite: {report.suite}", f"columns: {','.join(columns)}", tolerance_comment(ToleranceConfig.defaults())]
        text = render_csv(columns, rows, comments, run.float_format)
    else:
        text = report.model_dump_json(indent=2) + "\n"
    write_output(text, args.out)
    for result in report.results:
        if not result.passed and result.detail.get("role") != "reported":
            logger.warning("[CLI] check %s failed at %s (max error %.3e)", result.name, result.first_failure, result.max_error or 0.0)
    logger.info("[CLI] suite %s %s", report.suite, "passed" if report.passed else "failed")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_limits(args, tolerances: ToleranceConfig, run: RunConfig) -> int:
    which = LimitKind(args.which)
    if which is LimitKind.MEIXNER_LAGUERRE:
        params = [cli_number(h) for h in parse_list(args.h)]
        grid = parse_grid(args.s_grid or "0.5:5:0.5")
    else:
        params = [int(size) for size in parse_list(args.N)]
        grid = parse_grid(args.s_grid or "-2:2:0.5")
    if len(params) < 4:
        raise InvalidParameterError("a limit schedule needs at least 4 entries")
    schedule = LimitSchedule(
        which=which,
        n=args.n,
        params=params,
        s_grid=grid,
        alpha=cli_number(args.alpha),
        variant=Variant(args.variant),
    )
    report = run_schedule(schedule)
    if args.format == "json":
        text = report.model_dump_json(indent=2) + "\n"
    else:
        columns = ["schedule_param", "n", "sup_error", "rms_error", "fitted_order_so_far"]
        comments = [
            f"limit: {report.which} variant={report.variant}",
            "scaling: " + ", ".join(f"{k}={v}" for k, v in report.scaling.items()),
            f"columns: {','.join(columns)}",
            f"fitted_order: {format_value(report.fitted_order, run.float_format)} monotone: {str(report.monotone).lower()}",
        ]
        text = render_csv(columns, schedule_rows(report), comments, run.float_format)
    write_output(text, args.out)
    return EXIT_OK if report.monotone else EXIT_CHECK_FAILED


# --- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=["csv", "json"], default=None)
    output.add_argument("--out", default=None, help="output path (default: stdout)")
    output.add_argument("--tolerance", type=float, default=None, help="override every contract tolerance")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", default="hermite", choices=POLY_FAMILIES + [WIGNER])
    for name in ("p", "N", "alpha", "gamma", "mu", "j", "beta"):
        family.add_argument(f"--{name}", default=None)
    family.add_argument("--nmax", type=int, default=None)
    family.add_argument("--dim", type=int, default=12, help="truncation size for commutator checks")
    family.add_argument("--grid", default=None, help="continuous grid start:stop:step, e.g. --grid -4:4:0.5")
    family.add_argument("--points", default=None, help="discrete range first:last")

    parser = argparse.ArgumentParser(description="Hypergeometric orthogonal polynomials: tables, checks and limits")
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    tabulate = sub.add_parser("tabulate", parents=[output, family], help="tabulate P_n, psi_n or d-matrices")
    tabulate.set_defaults(handler=cmd_tabulate, default_format="csv", default_nmax=4)

    check = sub.add_parser("check", parents=[output, family], help="run a check suite")
    check.add_argument("suite", choices=SUITES)
    check.set_defaults(handler=cmd_check, default_format="json", default_nmax=10)

    limits = sub.add_parser("limits", parents=[output], help="run a discrete-to-continuous limit schedule")
    limits.add_argument("which", choices=[kind.value for kind in LimitKind])
    limits.add_argument("--n", type=int, default=0)
    limits.add_argument("--alpha", default="0")
    limits.add_argument("--h", default="0.1,0.05,0.025,0.0125")
    limits.add_argument("--N", default="16,64,256,1024")
    limits.add_argument("--s-grid", dest="s_grid", default=None)
    limits.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.RAW.value)
    limits.set_defaults(handler=cmd_limits, default_format="csv", default_nmax=None)
    return parser


GRID_FLAGS = ("--grid", "--s-grid")


def join_grid_values(argv: Sequence[str]) -> list[str]:
    """Rewrite `--grid -4:4:0.5` as `--grid=-4:4:0.5`; argparse reads a leading "-" as a flag."""
    joined: list[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token in GRID_FLAGS and i + 1 < len(tokens) and tokens[i + 1].startswith("-") and not tokens[i + 1].startswith("--"):
            joined.append(f"{token}={tokens[i + 1]}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(join_grid_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    run = RunConfig.from_env()
    logging.basicConfig(level=getattr(logging, (args.log_level or run.log_level).upper(), logging.INFO))
    if args.format is None:
        args.format = args.default_format
    if getattr(args, "nmax", None) is None:
        args.nmax = args.default_nmax

    try:
        tolerances = ToleranceConfig.from_env()
        if args.tolerance is not None:
            tolerances = tolerances.with_override(args.tolerance)
        return args.handler(args, tolerances, run)
    except (InvalidParameterError, OutsideSupportError, IndexRangeError, DegenerateParameterError, ValueError) as exc:
        logger.error("[CLI] %s", exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("[CLI] cannot write output: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
