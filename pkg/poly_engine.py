"""
Polynomial sequences of hypergeometric type built three independent ways:
the three-term recurrence, the raising-operator chain and the lowering
descent, plus residual checks of the defining equations and Gram matrices.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import stirling2

from family_catalog import (
    DegenerateParameterError,
    FamilyName,
    FamilySpec,
    IndexRangeError,
    RecurrenceCoefficients,
    lambda_n,
    lambda_over_n,
    log_weight,
    pochhammer,
    tau_n_poly,
    total_mass,
    weight,
)
from rational_poly import Number, RationalPoly

logger = logging.getLogger(__name__)


@dataclass
class PolySeq:
    family: FamilySpec
    polys: list[RationalPoly]
    route: str = "recurrence"

    @property
    def max_degree(self) -> int:
        return len(self.polys) - 1

    @property
    def coeffs(self) -> list[tuple[Number, ...]]:
        return [poly.coeffs for poly in self.polys]

    def __getitem__(self, n: int) -> RationalPoly:
        return self.polys[n]


@dataclass
class GramMatrix:
    entries: list[list[Number]]
    exact: bool
    method: str
    tail_index: Optional[int] = None
    tail_bound: Optional[float] = None

    def as_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])


def _check_n_max(spec: FamilySpec, n_max: int) -> None:
    if n_max < 0:
        raise IndexRangeError(f"n_max must be >= 0, got {n_max}")
    if spec.max_index is not None and n_max > spec.max_index:
        raise IndexRangeError(f"n_max={n_max} exceeds the range 0..{spec.max_index} of {spec!r}")


def ground_polynomial(spec: FamilySpec) -> RationalPoly:
    """Solve the n = 0 lowering relation for P_0.

    With P_{-1} = 0 the relation reads sigma*D P_0 = b(x) P_0; for the
    hypergeometric families b vanishes identically, so P_0 is constant and
    the leading_norm_rule fixes it to 1.
    """
    bracket = lowering_bracket(spec, 0)
    scale = max((abs(float(c)) for c in bracket.coeffs), default=0.0)
    if bracket and (spec.exact or scale > 1e-12):
        raise DegenerateParameterError(f"n=0 lowering relation of {spec!r} has no constant solution")
    return RationalPoly.constant(spec.number(1))


def build_by_recurrence(spec: FamilySpec, n_max: int, recurrence: Optional[RecurrenceCoefficients] = None) -> PolySeq:
    _check_n_max(spec, n_max)
    rec = recurrence or spec.recurrence
    x = RationalPoly.x()
    polys = [RationalPoly.constant(spec.number(1))]
    previous = RationalPoly()
    for n in range(n_max):
        a_n = rec.alpha_n(n)
        if a_n == 0:
            raise DegenerateParameterError(f"alpha_{n} = 0 for {spec!r}")
        current = polys[-1]
        nxt = (x * current - current * rec.beta_n(n) - previous * rec.gamma_n(n)) / a_n
        previous = current
        polys.append(nxt)
    logger.debug("[PolyEngine] built %r up to n=%d by recurrence", spec, n_max)
    return PolySeq(family=spec, polys=polys, route="recurrence")


def _difference(spec: FamilySpec, poly: RationalPoly) -> RationalPoly:
    """P' on continuous supports, nabla P on discrete ones."""
    return poly.backward_difference() if spec.is_discrete else poly.derivative()


def raising_step(spec: FamilySpec, poly: RationalPoly, n: int) -> RationalPoly:
    """P_{n+1} from P_n via the simplified (C3)/(D3)."""
    l_2n = lambda_over_n(spec, 2 * n)
    l_2n1 = lambda_over_n(spec, 2 * n + 1)
    if l_2n == 0 or l_2n1 == 0:
        raise DegenerateParameterError(f"lambda_{2 * n} or lambda_{2 * n + 1} vanishes for {spec!r}")
    a_n = spec.recurrence.alpha_n(n)
    if a_n == 0:
        raise DegenerateParameterError(f"alpha_{n} = 0 for {spec!r}")
    ratio = lambda_over_n(spec, n) / l_2n1
    combined = spec.sigma * _difference(spec, poly) + tau_n_poly(spec, n) * poly * ratio
    return -combined / (l_2n * a_n)


def build_by_raising(spec: FamilySpec, n_max: int) -> PolySeq:
    _check_n_max(spec, n_max)
    polys = [ground_polynomial(spec)]
    for n in range(n_max):
        polys.append(raising_step(spec, polys[-1], n))
    logger.debug("[PolyEngine] built %r up to n=%d by raising", spec, n_max)
    return PolySeq(family=spec, polys=polys, route="raising")


def lowering_bracket(spec: FamilySpec, n: int, recurrence: Optional[RecurrenceCoefficients] = None) -> RationalPoly:
    """Coefficient of P_n in (C4) / the backward-difference lowering relation."""
    rec = recurrence or spec.recurrence
    ratio = lambda_over_n(spec, n) / lambda_over_n(spec, 2 * n + 1)
    shift = RationalPoly.linear(-rec.beta_n(n), 1)
    return -(tau_n_poly(spec, n) * ratio) - shift * lambda_over_n(spec, 2 * n)


def forward_lowering_bracket(spec: FamilySpec, n: int) -> RationalPoly:
    """Coefficient of P_n in the forward-difference lowering relation (discrete)."""
    return lowering_bracket(spec, n) - RationalPoly.constant(lambda_n(spec, n))


def _lowering_divisor(spec: FamilySpec, n: int, recurrence: Optional[RecurrenceCoefficients]) -> Number:
    rec = recurrence or spec.recurrence
    divisor = lambda_over_n(spec, 2 * n) * rec.gamma_n(n)
    if divisor == 0:
        raise DegenerateParameterError(f"gamma_{n} = 0 for {spec!r}; cannot lower")
    return divisor


def lower(spec: FamilySpec, seq: PolySeq, n: int, *, form: str = "backward") -> RationalPoly:
    """P_{n-1} from P_n.

    form="backward" uses sigma*D P_n (derivative or nabla), the rearranged
    (C3)/(D3); form="forward" uses (sigma + tau)*Delta P_n and is only
    defined for discrete families.
    """
    if not 1 <= n <= seq.max_degree:
        raise IndexRangeError(f"cannot lower index {n} of a sequence of degree {seq.max_degree}")
    poly = seq.polys[n]
    divisor = _lowering_divisor(spec, n, None)
    if form == "backward":
        lhs = spec.sigma * _difference(spec, poly)
        return (lhs - lowering_bracket(spec, n) * poly) / divisor
    if form == "forward":
        if not spec.is_discrete:
            raise ValueError("forward-difference lowering applies to discrete families only")
        lhs = (spec.sigma + spec.tau) * poly.forward_difference()
        return (lhs - forward_lowering_bracket(spec, n) * poly) / divisor
    raise ValueError(f"unknown lowering form {form!r}")


def equation_polynomial(spec: FamilySpec, poly: RationalPoly, n: int) -> RationalPoly:
    """sigma P'' + tau P' + lambda_n P, or its difference analogue."""
    lam = lambda_n(spec, n)
    if spec.is_discrete:
        delta = poly.forward_difference()
        return spec.sigma * delta.backward_difference() + spec.tau * delta + poly * lam
    return spec.sigma * poly.derivative(2) + spec.tau * poly.derivative() + poly * lam


def equation_residual(spec: FamilySpec, seq: PolySeq, n: int, point: Number) -> Number:
    if n > seq.max_degree:
        raise IndexRangeError(f"index {n} exceeds the sequence degree {seq.max_degree}")
    return evaluate_poly(equation_polynomial(spec, seq.polys[n], n), point)


def evaluate_poly(poly: RationalPoly, point: Number) -> Number:
    """Evaluate exactly when the coefficients are rational (floats are exact binary rationals)."""
    if poly.is_exact and isinstance(point, float) and math.isfinite(point):
        return poly.evaluate(Fraction(point))
    return poly.evaluate(point)


def evaluate(seq: PolySeq, n: int, point: Number) -> Number:
    return evaluate_poly(seq.polys[n], point)


def evaluate_by_recurrence(spec: FamilySpec, n_max: int, points: Sequence[float]) -> np.ndarray:
    """Float engine: rows are P_0..P_{n_max} at the given points."""
    _check_n_max(spec, n_max)
    x = np.asarray(points, dtype=float)
    rec = spec.recurrence
    values = np.zeros((n_max + 1, x.size))
    values[0] = 1.0
    previous = np.zeros_like(x)
    for n in range(n_max):
        current = values[n]
        values[n + 1] = (
            (x - float(rec.beta_n(n))) * current - float(rec.gamma_n(n)) * previous
        ) / float(rec.alpha_n(n))
        previous = current
    return values


def jacobi_matrix(spec: FamilySpec, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric tridiagonal matrix of the orthonormal recurrence."""
    rec = spec.recurrence
    diagonal = np.array([float(rec.beta_n(k)) for k in range(size)])
    products = [float(rec.alpha_n(k) * rec.gamma_n(k + 1)) for k in range(size - 1)]
    if any(value <= 0 for value in products):
        raise DegenerateParameterError(f"recurrence of {spec!r} is not positive-definite")
    return diagonal, np.sqrt(np.array(products))


def gauss_rule(spec: FamilySpec, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Golub-Welsch nodes and weights, exact for degree <= 2*n_nodes - 1."""
    if n_nodes < 1:
        raise ValueError("n_nodes must be positive")
    if spec.max_index is not None and n_nodes > spec.max_index + 1:
        raise IndexRangeError(f"{spec!r} supports at most {spec.max_index + 1} nodes")
    diagonal, off = jacobi_matrix(spec, n_nodes)
    if n_nodes == 1:
        nodes, vectors = diagonal.copy(), np.ones((1, 1))
    else:
        nodes, vectors = eigh_tridiagonal(diagonal, off)
    weights = float(total_mass(spec)) * vectors[0, :] ** 2
    return nodes, weights


def _stirling2(j_max: int) -> list[list[int]]:
    return [[int(stirling2(j, k, exact=True)) for k in range(j_max + 1)] for j in range(j_max + 1)]


def meixner_relative_moments(spec: FamilySpec, j_max: int) -> list[Number]:
    """sum_x x^j rho(x) / mass, from the factorial moments (gamma)_k (mu/(1-mu))^k."""
    g, mu = spec.param("gamma"), spec.param("mu")
    ratio = mu / (1 - mu)
    factorial_moments = [pochhammer(g, k) * ratio**k for k in range(j_max + 1)]
    stirling = _stirling2(j_max)
    return [sum(stirling[j][k] * factorial_moments[k] for k in range(j + 1)) for j in range(j_max + 1)]


def _gram_from_moments(seq: PolySeq, moments: list[Number], scale: Number) -> list[list[Number]]:
    size = len(seq.polys)
    entries = [[None] * size for _ in range(size)]
    for n in range(size):
        for m in range(n, size):
            product = seq.polys[n] * seq.polys[m]
            value = sum((c * moments[j] for j, c in enumerate(product.coeffs)), start=seq.family.number(0))
            entries[n][m] = entries[m][n] = value * scale
    return entries


def _meixner_float_gram(spec: FamilySpec, n_max: int, tail: float) -> GramMatrix:
    g, mu = float(spec.param("gamma")), float(spec.param("mu"))
    if not mu < 1:
        raise DegenerateParameterError("Meixner sum diverges for mu >= 1")
    mode = max(0.0, (g - 1) * mu / (1 - mu))
    gram = np.zeros((n_max + 1, n_max + 1))
    start, chunk = 0, 256
    while True:
        xs = np.arange(start, start + chunk, dtype=float)
        values = evaluate_by_recurrence(spec, n_max, xs)
        rho = np.exp([log_weight(spec, int(x)) for x in xs])
        gram += (values * rho) @ values.T
        terms = rho * np.max(values**2, axis=0)
        if xs[-1] > mode and terms[-1] < tail:
            tail_index = int(xs[-1])
            break
        start += chunk
        if start > 10**7:
            raise DegenerateParameterError(f"Meixner tail of {spec!r} did not fall below {tail}")
    logger.info("[PolyEngine] Meixner Gram truncated at x=%d (tail term < %.1e)", tail_index, tail)
    return GramMatrix(entries=gram.tolist(), exact=False, method="truncated-sum", tail_index=tail_index, tail_bound=tail)


def orthogonality_matrix(spec: FamilySpec, n_max: int, *, tail: float = 1e-30, seq: Optional[PolySeq] = None) -> GramMatrix:
    """Gram matrix <P_n, P_m>_rho for n, m <= n_max."""
    _check_n_max(spec, n_max)
    if spec.name is FamilyName.KRAVCHUK:
        if spec.exact:
            seq = seq or build_by_recurrence(spec, n_max)
            moments = [sum((Fraction(x) ** j * weight(spec, x) for x in range(spec.param("N") + 1)), start=Fraction(0))
                       for j in range(2 * n_max + 1)]
            return GramMatrix(entries=_gram_from_moments(seq, moments, Fraction(1)), exact=True, method="exact-sum")
        xs = np.arange(spec.param("N") + 1, dtype=float)
        values = evaluate_by_recurrence(spec, n_max, xs)
        rho = np.array([float(weight(spec, int(x))) for x in xs])
        return GramMatrix(entries=((values * rho) @ values.T).tolist(), exact=False, method="float-sum")
    if spec.name is FamilyName.MEIXNER:
        if spec.exact:
            seq = seq or build_by_recurrence(spec, n_max)
            moments = meixner_relative_moments(spec, 2 * n_max)
            mass = total_mass(spec)
            return GramMatrix(
                entries=_gram_from_moments(seq, moments, mass),
                exact=isinstance(mass, Fraction),
                method="factorial-moments",
            )
        return _meixner_float_gram(spec, n_max, tail)
    nodes, weights = gauss_rule(spec, n_max + 1)
    values = evaluate_by_recurrence(spec, n_max, nodes)
    return GramMatrix(entries=((values * weights) @ values.T).tolist(), exact=False, method="gauss-quadrature")


def export_poly_seq(seq: PolySeq):
    from family_catalog import family_descriptor
    from report_models import PolySeqExport

    return PolySeqExport(
        family=family_descriptor(seq.family),
        n_max=seq.max_degree,
        route=seq.route,
        coeffs=[poly.encoded() or ["0/1"] for poly in seq.polys],
    )


def poly_table_rows(seq: PolySeq, points: Sequence[Number]) -> list[tuple[str, int, Number, float]]:
    """Rows (family, n, point, P_n(point)) in index-major order."""
    rows = []
    for n, poly in enumerate(seq.polys):
        for point in points:
            rows.append((seq.family.name.value, n, point, float(evaluate_poly(poly, point))))
    return rows
