"""
Discrete-to-continuous limits: Meixner -> Laguerre as mu = 1 - h -> 1 and
Kravchuk/Wigner -> Hermite as N -> infinity, with measured convergence orders.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from family_catalog import (
    DegenerateParameterError,
    FamilyName,
    IndexRangeError,
    InvalidParameterError,
    make_family,
    parse_number,
)
from normalized_functions import polynomial, psi, psi_or_zero
from poly_engine import evaluate_poly
from rational_poly import Number

logger = logging.getLogger(__name__)

# largest lattice abscissa s/h the Meixner side is evaluated at
LATTICE_HORIZON = 10**6


class LimitKind(str, Enum):
    MEIXNER_LAGUERRE = "meixner-laguerre"
    KRAVCHUK_HERMITE = "kravchuk-hermite"


class Variant(str, Enum):
    RAW = "raw"
    NORMALIZED = "normalized"


@dataclass
class LimitMetrics:
    sup_error: float
    rms_error: float
    operator_residual: float
    points: int


@dataclass
class LimitSchedule:
    """
    One convergence experiment. `params` are the h values (decreasing) for
    Meixner -> Laguerre or the N values (increasing) for Kravchuk -> Hermite.
    """

    which: LimitKind
    n: int
    params: list[Number]
    s_grid: list[float]
    alpha: Number = 0
    variant: Variant = Variant.RAW
    p: Fraction = Fraction(1, 2)
    scaling: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.which = LimitKind(self.which)
        self.variant = Variant(self.variant)
        if len(self.params) < 2:
            raise InvalidParameterError("a schedule needs at least two entries")
        if self.which is LimitKind.MEIXNER_LAGUERRE:
            if any(not 0 < float(h) < 1 for h in self.params):
                raise InvalidParameterError("h must lie in (0, 1)")
            if any(float(b) >= float(a) for a, b in zip(self.params, self.params[1:])):
                raise InvalidParameterError("the h-schedule must be strictly decreasing")
            self.scaling = {"x": "s/h", "amplitude": "h^(-1/2)" if self.variant is Variant.NORMALIZED else "1/n!"}
        else:
            if any(int(b) <= int(a) for a, b in zip(self.params, self.params[1:])):
                raise InvalidParameterError("the N-schedule must be strictly increasing")
            self.scaling = {"x": "round(Np + sqrt(2Npq) s)", "amplitude": "(2Npq)^(1/4)", "p": str(self.p)}

    @property
    def steps(self) -> list[float]:
        """Step size per entry: h, or 1/N."""
        if self.which is LimitKind.MEIXNER_LAGUERRE:
            return [float(h) for h in self.params]
        return [1.0 / int(size) for size in self.params]


def _metrics(errors: Sequence[float], residuals: Sequence[float]) -> LimitMetrics:
    errors = np.abs(np.asarray(errors, dtype=float))
    return LimitMetrics(
        sup_error=float(np.max(errors)),
        rms_error=float(np.sqrt(np.mean(errors**2))),
        operator_residual=float(np.max(np.abs(residuals))) if len(residuals) else 0.0,
        points=int(errors.size),
    )


def _meixner_family(alpha: Number, h: Number):
    alpha, h = Fraction(parse_number(alpha)), Fraction(parse_number(h))
    return make_family(FamilyName.MEIXNER, {"gamma": alpha + 1, "mu": 1 - h}, exact=True), alpha, h


def _laguerre_operator_residual(alpha: float, n: int, h: float, s: float, laguerre) -> float:
    """(ND2) coefficients at mu = 1-h, gamma = alpha+1, x = s/h applied to the Laguerre functions."""
    mu, g, x = 1 - h, alpha + 1, s / h
    up = math.sqrt(mu * (g + n) * (n + 1)) * psi(laguerre, n + 1, s)
    down = math.sqrt(mu * n * (n + g - 1)) * psi(laguerre, n - 1, s) if n > 0 else 0.0
    return up + down - (mu * (x + n + g) - x + n) * psi(laguerre, n, s)


def meixner_to_laguerre_error(
    n: int,
    alpha: Number,
    h: Number,
    s_grid: Sequence[float],
    *,
    variant: Variant = Variant.RAW,
) -> LimitMetrics:
    """Compare (1/n!) m_n^{(alpha+1, 1-h)}(s/h) with L_n^alpha(s), or the normalized functions."""
    variant = Variant(variant)
    if n < 0:
        raise IndexRangeError("n must be >= 0")
    meixner, alpha_q, h_q = _meixner_family(alpha, h)
    if not 0 < h_q < 1:
        raise InvalidParameterError(f"h must lie in (0, 1), got {h}")
    laguerre = make_family(FamilyName.LAGUERRE, {"alpha": alpha_q})
    if max(float(s) for s in s_grid) / float(h_q) > LATTICE_HORIZON:
        raise DegenerateParameterError(f"s/h exceeds the lattice horizon {LATTICE_HORIZON} at h={h}")

    errors, residuals = [], []
    for s in s_grid:
        if s <= 0:
            raise InvalidParameterError(f"Laguerre grid points must be positive, got {s}")
        if variant is Variant.RAW:
            x = Fraction(s) / h_q
            discrete = evaluate_poly(polynomial(meixner, n), x) / math.factorial(n)
            continuous = evaluate_poly(polynomial(laguerre, n), Fraction(s))
            errors.append(float(discrete - continuous))
        else:
            x = float(s) / float(h_q)
            low = math.floor(x)
            frac = x - low
            lattice = (1 - frac) * psi_or_zero(meixner, n, low) + frac * psi_or_zero(meixner, n, low + 1)
            errors.append(lattice / math.sqrt(float(h_q)) - psi(laguerre, n, s))
        residuals.append(_laguerre_operator_residual(float(alpha_q), n, float(h_q), float(s), laguerre))
    metrics = _metrics(errors, residuals)
    logger.debug("[LimitLab] meixner->laguerre n=%d h=%s sup=%.3e", n, h, metrics.sup_error)
    return metrics


def _hermite_scaled(N: int, p: Fraction):
    q = 1 - p
    sigma = math.sqrt(2 * N * float(p * q))
    return sigma, N * float(p), math.sqrt(sigma)


def kravchuk_to_hermite_error(n: int, N: int, s_grid: Sequence[float], *, p: Fraction = Fraction(1, 2)) -> LimitMetrics:
    """(2Npq)^{1/4} psi_n^{Kravchuk}(x) against the Hermite psi_n at the lattice abscissa of x."""
    if n >= N:
        raise IndexRangeError(f"index {n} needs N > {n}, got N={N}")
    kravchuk = make_family(FamilyName.KRAVCHUK, {"p": p, "N": N})
    hermite = make_family(FamilyName.HERMITE)
    sigma, center, amplitude = _hermite_scaled(N, Fraction(p))
    pf = float(p)
    pq = pf * (1 - pf)

    def abscissa(y: int) -> float:
        return (y - center) / sigma

    def h(k: int, y: int) -> float:
        return psi(hermite, k, abscissa(y)) if k >= 0 else 0.0

    errors, residuals = [], []
    for s in s_grid:
        x = int(round(center + sigma * s))
        if not 0 <= x <= N:
            raise InvalidParameterError(f"s={s} maps outside the Kravchuk support at N={N}")
        errors.append(amplitude * psi(kravchuk, n, x) - h(n, x))
        raising = (
            math.sqrt(pq * (n + 1) * (N - n)) * h(n + 1, x)
            + pf * (N - x - n) * h(n, x)
            - math.sqrt(pq * x * (N - x + 1)) * h(n, x - 1)
        )
        lowering = (
            math.sqrt(pq * n * (N - n + 1)) * h(n - 1, x)
            + pf * (N - x - n) * h(n, x)
            - math.sqrt(pq * (N - x) * (x + 1)) * h(n, x + 1)
        )
        residuals.append(max(abs(raising), abs(lowering)) / (sigma / math.sqrt(2)))
    metrics = _metrics(errors, residuals)
    logger.debug("[LimitLab] kravchuk->hermite n=%d N=%d sup=%.3e", n, N, metrics.sup_error)
    return metrics


def fit_order(steps: Sequence[float], errors: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log(error) against log(step); None when every error is zero."""
    pairs = [(math.log(s), math.log(e)) for s, e in zip(steps, errors) if e > 0]
    if len(pairs) < 2:
        return None
    xs, ys = zip(*pairs)
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def errors_decrease(errors: Sequence[float]) -> bool:
    """Strict decrease along the schedule; all-zero (exact) schedules count as decreasing."""
    if all(e == 0 for e in errors):
        return True
    return all(b < a for a, b in zip(errors, errors[1:]))


def run_schedule(schedule: LimitSchedule):
    from report_models import LimitReport, LimitRow

    rows: list[LimitRow] = []
    sups: list[float] = []
    for param, step in zip(schedule.params, schedule.steps):
        if schedule.which is LimitKind.MEIXNER_LAGUERRE:
            metrics = meixner_to_laguerre_error(schedule.n, schedule.alpha, param, schedule.s_grid, variant=schedule.variant)
        else:
            metrics = kravchuk_to_hermite_error(schedule.n, int(param), schedule.s_grid, p=schedule.p)
        sups.append(metrics.sup_error)
        rows.append(
            LimitRow(
                schedule_param=float(param),
                n=schedule.n,
                sup_error=metrics.sup_error,
                rms_error=metrics.rms_error,
                operator_residual=metrics.operator_residual,
                fitted_order_so_far=fit_order(schedule.steps[: len(sups)], sups),
            )
        )
    exact = all(e == 0 for e in sups)
    monotone = errors_decrease(sups)
    if not monotone:
        logger.warning("[LimitLab] %s n=%d: errors are not monotone along the schedule: %s", schedule.which.value, schedule.n, sups)
    return LimitReport(
        which=schedule.which.value,
        n=schedule.n,
        variant=schedule.variant.value if schedule.which is LimitKind.MEIXNER_LAGUERRE else Variant.NORMALIZED.value,
        rows=rows,
        fitted_order=fit_order(schedule.steps, sups),
        monotone=monotone,
        exact=exact,
        scaling=dict(schedule.scaling),
    )


def schedule_rows(report) -> list[tuple[float, int, float, float, Optional[float]]]:
    """CSV rows (schedule_param, n, sup_error, rms_error, fitted_order_so_far)."""
    return [(row.schedule_param, row.n, row.sup_error, row.rms_error, row.fitted_order_so_far) for row in report.rows]
