"""
Exact-rational certification of a family: every construction route and
relation of the polynomial engine is re-checked in rational arithmetic, and
the float recurrence engine is measured against it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from config import ToleranceConfig
from family_catalog import (
    FamilySpec,
    InvalidParameterError,
    RecurrenceCoefficients,
    make_family,
    squared_norm,
)
from poly_engine import (
    PolySeq,
    build_by_raising,
    build_by_recurrence,
    equation_polynomial,
    evaluate_by_recurrence,
    evaluate_poly,
    lower,
    orthogonality_matrix,
)
from rational_poly import Number, RationalPoly, format_number

__all__ = ["RationalPoly", "certify_family", "float_drift", "perturbed_recurrence"]

logger = logging.getLogger(__name__)


@dataclass
class _Outcome:
    failure: Optional[str] = None
    max_error: float = 0.0


def _size(value) -> float:
    if isinstance(value, RationalPoly):
        return max((abs(float(c)) for c in value.coeffs), default=0.0)
    return abs(float(value))


def _is_zero(value, exact: bool, tolerance: float) -> bool:
    if exact:
        return not value
    return _size(value) <= tolerance


def _scan(spec: FamilySpec, relation: str, indices, residual: Callable[[int], object], tolerance: float) -> _Outcome:
    outcome = _Outcome()
    for n in indices:
        value = residual(n)
        outcome.max_error = max(outcome.max_error, _size(value))
        if outcome.failure is None and not _is_zero(value, spec.exact, tolerance):
            outcome.failure = f"{spec.name.value} n={n} {relation}"
    return outcome


def perturbed_recurrence(spec: FamilySpec, index: int, delta: Number) -> RecurrenceCoefficients:
    """Catalog recurrence with gamma_index shifted by delta (fault injection)."""
    rec = spec.recurrence
    return RecurrenceCoefficients(
        alpha_n=rec.alpha_n,
        beta_n=rec.beta_n,
        gamma_n=lambda n: rec.gamma_n(n) + (delta if n == index else 0),
    )


def certify_family(
    spec: FamilySpec,
    n_max: int,
    *,
    recurrence_override: Optional[RecurrenceCoefficients] = None,
    tolerances: Optional[ToleranceConfig] = None,
):
    """
    Run the certification checks in order and return a CertificateReport.

    The sequence under test is built from `recurrence_override` when given,
    while every check compares against the catalog coefficients, so an
    injected fault is reported at the first relation and index it breaks.
    Families with float parameters are certified with tolerances instead.
    """
    from report_models import CertificateCheck, CertificateReport

    tolerances = tolerances or ToleranceConfig.from_env()
    tol = tolerances.residual
    mode = "exact" if spec.exact else "float"
    if not spec.exact:
        logger.info("[ExactOracle] %r has irrational parameters, certifying in float mode", spec)

    seq = build_by_recurrence(spec, n_max, recurrence_override)
    polys = seq.polys
    rec = spec.recurrence
    x = RationalPoly.x()
    checks: list[CertificateCheck] = []

    def record(name: str, outcome: _Outcome, status_ok: str = "pass", check_mode: str = mode) -> None:
        checks.append(
            CertificateCheck(
                name=name,
                status="fail" if outcome.failure else status_ok,
                mode=check_mode,
                first_failure=outcome.failure,
                max_error=outcome.max_error,
            )
        )

    recurrence_name = "D2" if spec.is_discrete else "C2"
    record(
        recurrence_name,
        _scan(
            spec, recurrence_name, range(n_max),
            lambda n: x * polys[n] - polys[n + 1] * rec.alpha_n(n) - polys[n] * rec.beta_n(n)
            - (polys[n - 1] * rec.gamma_n(n) if n else RationalPoly()),
            tol,
        ),
    )

    raised = build_by_raising(spec, n_max)
    record("route_equivalence", _scan(spec, "route_equivalence", range(n_max + 1), lambda n: raised.polys[n] - polys[n], tol))

    record(
        "lowering_inversion",
        _scan(spec, "lowering_inversion", range(1, n_max + 1), lambda n: lower(spec, seq, n) - polys[n - 1], tol),
    )

    record(
        "defining_equation",
        _scan(spec, "defining_equation", range(n_max + 1), lambda n: equation_polynomial(spec, polys[n], n), tol),
    )

    if spec.is_discrete:
        record(
            "forward_lowering",
            _scan(spec, "forward_lowering", range(1, n_max + 1), lambda n: lower(spec, seq, n, form="forward") - polys[n - 1], tol),
        )

    gram = orthogonality_matrix(spec, n_max, tail=tolerances.meixner_tail, seq=seq)
    gram_mode = "exact" if gram.exact and spec.exact else "float"
    gram_tol = tolerances.quadrature if gram.method == "gauss-quadrature" else tol
    off = _Outcome()
    diag = _Outcome()
    for n in range(n_max + 1):
        scale = abs(float(gram.entries[n][n])) or 1.0
        for m in range(n_max + 1):
            if m == n:
                continue
            value = gram.entries[n][m]
            err = abs(float(value)) / scale
            off.max_error = max(off.max_error, err)
            bad = value != 0 if gram_mode == "exact" else err > gram_tol
            if bad and off.failure is None:
                off.failure = f"{spec.name.value} n={n} m={m} gram_diagonal"
        expected = squared_norm(spec, n)
        if gram_mode == "exact":
            bad = gram.entries[n][n] != expected
            err = abs(float(gram.entries[n][n] - expected)) / float(expected)
        else:
            err = abs(float(gram.entries[n][n]) - float(expected)) / float(expected)
            bad = err > gram_tol
        diag.max_error = max(diag.max_error, err)
        if bad and diag.failure is None:
            diag.failure = f"{spec.name.value} n={n} squared_norm"
    record("gram_diagonal", off, "pass" if gram_mode == "exact" else "float", gram_mode)
    record("squared_norm", diag, "pass" if gram_mode == "exact" else "float", gram_mode)

    report = CertificateReport(
        family=spec.name.value,
        params={k: format_number(v) for k, v in spec.params.items()},
        n_max=n_max,
        exact=spec.exact,
        checks=checks,
    )
    failure = report.first_failure()
    if failure:
        logger.warning("[ExactOracle] certification failed: %s", failure.first_failure)
    else:
        logger.info("[ExactOracle] %r certified up to n=%d (%d checks)", spec, n_max, len(checks))
    return report


def float_drift(spec: FamilySpec, n_max: int, grid: Sequence[Number], *, tolerance: Optional[float] = None):
    """Max |float recurrence - exact| over grid and indices, relative to each index's sup of |exact|."""
    from report_models import DriftReport

    if not spec.exact:
        raise InvalidParameterError(f"float drift needs rational parameters, got {spec!r}")
    tolerance = ToleranceConfig.from_env().drift if tolerance is None else tolerance
    points = [float(p) for p in grid]
    seq: PolySeq = build_by_recurrence(spec, n_max)
    exact = np.array([[float(evaluate_poly(poly, Fraction(p))) for p in points] for poly in seq.polys])
    floating = evaluate_by_recurrence(make_family(spec.name, spec.params, exact=False), n_max, points)

    worst, worst_n, worst_x = 0.0, None, None
    for n in range(n_max + 1):
        scale = float(np.max(np.abs(exact[n]))) or 1.0
        rel = np.abs(floating[n] - exact[n]) / scale
        k = int(np.argmax(rel))
        if rel[k] > worst:
            worst, worst_n, worst_x = float(rel[k]), n, points[k]
    logger.info("[ExactOracle] float drift of %r up to n=%d: %.3e", spec, n_max, worst)
    return DriftReport(
        family=spec.name.value,
        params={k: format_number(v) for k, v in spec.params.items()},
        n_max=n_max,
        points=len(points),
        max_relative_drift=worst,
        worst_index=worst_n,
        worst_point=worst_x,
        tolerance=tolerance,
        passed=worst < tolerance,
    )
