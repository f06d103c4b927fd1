"""
Truncated matrix realizations of the creation/annihilation operators on the
index basis, their commutators, and the ladder construction of normalized
functions from the ground state.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from family_catalog import (
    DegenerateParameterError,
    FamilyName,
    FamilySpec,
    InvalidParameterError,
    OutsideSupportError,
    log_weight,
    make_family,
    parse_number,
)
from normalized_functions import NormalizedState
from poly_engine import gauss_rule
from rational_poly import Number, RationalPoly

logger = logging.getLogger(__name__)


class LadderFamily(str, Enum):
    HERMITE = "hermite"
    LAGUERRE = "laguerre"
    MEIXNER = "meixner"
    WIGNER = "wigner"


class Operator(str, Enum):
    RAISE = "raise"
    LOWER = "lower"
    DIAGONAL = "diagonal"


# infinite-dimensional algebras lose the last index row/column to truncation
TRUNCATED = {LadderFamily.HERMITE, LadderFamily.LAGUERRE, LadderFamily.MEIXNER}


@dataclass(frozen=True)
class LadderMatrix:
    family: LadderFamily
    operator: Operator
    dim: int
    entries: np.ndarray
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        self.entries.setflags(write=False)

    @property
    def truncated(self) -> bool:
        return self.family in TRUNCATED


def _ladder_family(family: Union[LadderFamily, FamilyName, str]) -> LadderFamily:
    value = family.value if isinstance(family, Enum) else str(family).lower()
    if value == FamilyName.KRAVCHUK.value:
        return LadderFamily.WIGNER
    try:
        return LadderFamily(value)
    except ValueError:
        raise InvalidParameterError(f"no ladder realization for family {family!r}") from None


def _float_param(params: dict, name: str) -> float:
    if name not in params:
        raise InvalidParameterError(f"missing parameter {name!r}")
    return float(parse_number(params[name]))


def _raise_entries(family: LadderFamily, dim: int, params: dict) -> np.ndarray:
    n = np.arange(dim - 1, dtype=float)
    if family is LadderFamily.HERMITE:
        return np.sqrt(n + 1)
    if family is LadderFamily.LAGUERRE:
        a = _float_param(params, "alpha")
        return np.sqrt((n + 1) * (n + a + 1))
    if family is LadderFamily.MEIXNER:
        g, mu = _float_param(params, "gamma"), _float_param(params, "mu")
        return np.sqrt(mu * (g + n) * (n + 1))
    # basis index n = j - m; A+ carries n -> n+1 (m -> m-1) with sqrt((j+m)(j-m+1)) / sqrt(2j)
    two_j = dim - 1
    return np.sqrt((two_j - n) * (n + 1)) / math.sqrt(two_j)


def _diagonal_entries(family: LadderFamily, dim: int, params: dict) -> np.ndarray:
    n = np.arange(dim, dtype=float)
    if family is LadderFamily.HERMITE:
        return n + 0.5
    if family is LadderFamily.LAGUERRE:
        return 2 * n + _float_param(params, "alpha") + 1
    if family is LadderFamily.MEIXNER:
        g, mu = _float_param(params, "gamma"), _float_param(params, "mu")
        return mu * (2 * n + g)
    two_j = dim - 1
    # A0 = m / (2j) with m = j - n
    return (two_j / 2 - n) / two_j


def ladder_matrix(
    family: Union[LadderFamily, FamilyName, str],
    operator: Union[Operator, str],
    dim: int,
    params: Optional[dict] = None,
) -> LadderMatrix:
    """Matrix of A+, A- or A0 on the first `dim` basis vectors; (A+)_{n+1,n} is the only nonzero band."""
    family = _ladder_family(family)
    try:
        operator = Operator(operator)
    except ValueError:
        raise InvalidParameterError(f"unknown operator {operator!r}") from None
    if dim < 2:
        raise InvalidParameterError(f"dim must be >= 2, got {dim}")
    params = dict(params or {})
    if family is LadderFamily.MEIXNER:
        mu = _float_param(params, "mu")
        if not 0 < mu < 1:
            raise InvalidParameterError(f"mu must lie in (0, 1), got {mu}")
    if operator is Operator.DIAGONAL:
        entries = np.diag(_diagonal_entries(family, dim, params))
    else:
        entries = np.diag(_raise_entries(family, dim, params), k=-1)
        if operator is Operator.LOWER:
            entries = entries.T.copy()
    shown = tuple(sorted((k, float(parse_number(v))) for k, v in params.items()))
    return LadderMatrix(family=family, operator=operator, dim=dim, entries=entries, params=shown)


def commutator(a: LadderMatrix, b: LadderMatrix) -> np.ndarray:
    if a.dim != b.dim:
        raise InvalidParameterError(f"dimension mismatch: {a.dim} != {b.dim}")
    return a.entries @ b.entries - b.entries @ a.entries


def _interior(matrix: np.ndarray, truncated: bool) -> np.ndarray:
    return matrix[:-1, :-1] if truncated else matrix


# (left, right, target operator, printed structure constant); "identity" targets I
def _relations(family: LadderFamily, params: dict) -> list[tuple[str, Operator, Operator, Union[Operator, str], float]]:
    if family is LadderFamily.HERMITE:
        return [
            ("[a,a+] = I", Operator.LOWER, Operator.RAISE, "identity", 1.0),
            ("[a+,A0] = -a+", Operator.RAISE, Operator.DIAGONAL, Operator.RAISE, -1.0),
        ]
    if family is LadderFamily.WIGNER:
        return [
            ("[A+,A-] = 2 A0", Operator.RAISE, Operator.LOWER, Operator.DIAGONAL, 2.0),
            ("[A+,A0] = +A+", Operator.RAISE, Operator.DIAGONAL, Operator.RAISE, 1.0),
            ("[A-,A0] = -A-", Operator.LOWER, Operator.DIAGONAL, Operator.LOWER, -1.0),
        ]
    scale = 2 * _float_param(params, "mu") if family is LadderFamily.MEIXNER else 2.0
    return [
        ("[A+,A-] = A0", Operator.RAISE, Operator.LOWER, Operator.DIAGONAL, 1.0),
        (f"[A+,A0] = +{scale:g} A+", Operator.RAISE, Operator.DIAGONAL, Operator.RAISE, scale),
        (f"[A-,A0] = -{scale:g} A-", Operator.LOWER, Operator.DIAGONAL, Operator.LOWER, -scale),
    ]


def closure_report(
    family: Union[LadderFamily, FamilyName, str],
    dim: int,
    params: Optional[dict] = None,
    *,
    tolerance: float = 1e-12,
):
    """
    Measure each commutator relation's structure constant by least squares on
    the interior entries and compare it with the printed one.
    """
    from report_models import ClosureRelation, ClosureReport

    family = _ladder_family(family)
    params = dict(params or {})
    truncated = family in TRUNCATED
    relations = []
    for label, left, right, target, printed in _relations(family, params):
        c = commutator(ladder_matrix(family, left, dim, params), ladder_matrix(family, right, dim, params))
        r = np.eye(dim) if target == "identity" else ladder_matrix(family, target, dim, params).entries
        c_in, r_in = _interior(c, truncated), _interior(r, truncated)
        denom = float(np.sum(r_in * r_in))
        measured = float(np.sum(c_in * r_in) / denom) if denom else 0.0
        measured_residual = float(np.max(np.abs(c_in - measured * r_in)))
        printed_residual = float(np.max(np.abs(c_in - printed * r_in)))
        entry = ClosureRelation(
            relation=label,
            printed_constant=printed,
            measured_constant=measured,
            measured_residual=measured_residual,
            printed_residual=printed_residual,
            closes=measured_residual < tolerance,
            matches_printed=printed_residual < tolerance,
        )
        if entry.closes and not entry.matches_printed:
            logger.warning(
                "[LadderAlgebra] %s %s: measured constant %.17g differs from printed %.17g",
                family.value, label, measured, printed,
            )
        relations.append(entry)
    return ClosureReport(
        family=family.value,
        params={k: str(v) for k, v in params.items()},
        dim=dim,
        interior=dim - 1 if truncated else dim,
        relations=relations,
    )


def export_matrix(matrix: LadderMatrix):
    from report_models import MatrixExport

    rows, cols = np.nonzero(matrix.entries)
    return MatrixExport(
        family=matrix.family.value,
        operator=matrix.operator.value,
        dim=matrix.dim,
        triplets=[[int(r), int(c), float(matrix.entries[r, c])] for r, c in zip(rows, cols)],
    )


# --- ladder construction of normalized functions -------------------------------


def _continuous_factors(spec: FamilySpec, n: int) -> list[RationalPoly]:
    """Polynomial parts Q_k of psi_k = sqrt(rho) Q_k, raised with (NC3)."""
    s = RationalPoly.x()
    if spec.name is FamilyName.HERMITE:
        factors = [RationalPoly.constant(math.pi ** -0.25)]
        for k in range(n):
            q = factors[-1]
            factors.append((s * q * 2 - q.derivative()) / math.sqrt(2 * (k + 1)))
        return factors
    a = float(spec.param("alpha"))
    factors = [RationalPoly.constant(math.exp(-0.5 * math.lgamma(a + 1)))]
    for k in range(n):
        q = factors[-1]
        lead = RationalPoly.linear(k + a + 1, -1)
        factors.append((lead * q + s * q.derivative()) / math.sqrt((k + 1) * (k + a + 1)))
    return factors


def _discrete_ground(spec: FamilySpec, upper: int) -> np.ndarray:
    """Ground state on 0..upper from A- psi_0 = 0 with (ND4) at n = 0."""
    values = np.empty(upper + 1)
    if spec.name is FamilyName.KRAVCHUK:
        p, size = float(spec.param("p")), spec.param("N")
        values[0] = (1 - p) ** (size / 2)
        for x in range(upper):
            values[x + 1] = values[x] * math.sqrt((size - x) * p / ((x + 1) * (1 - p)))
        return values
    g, mu = float(spec.param("gamma")), float(spec.param("mu"))
    values[0] = (1 - mu) ** (g / 2)
    for x in range(upper):
        values[x + 1] = values[x] * math.sqrt(mu * (x + g) / (x + 1))
    return values


def _discrete_raise(spec: FamilySpec, current: np.ndarray, k: int) -> np.ndarray:
    """(ND3) solved for psi_{k+1} on the whole lattice 0..len-1."""
    x = np.arange(len(current), dtype=float)
    shifted = np.concatenate(([0.0], current[:-1]))
    if spec.name is FamilyName.KRAVCHUK:
        p, size = float(spec.param("p")), spec.param("N")
        pq = p * (1 - p)
        return (-p * (size - x - k) * current + np.sqrt(pq * x * (size - x + 1)) * shifted) / math.sqrt(
            pq * (k + 1) * (size - k)
        )
    g, mu = float(spec.param("gamma")), float(spec.param("mu"))
    return (mu * (x + k + g) * current - np.sqrt(mu * x * (x + g - 1)) * shifted) / math.sqrt(
        mu * (g + k) * (k + 1)
    )


def _meixner_extent(spec: FamilySpec, n: int, upper: int) -> int:
    g, mu = float(spec.param("gamma")), float(spec.param("mu"))
    log_ground, x = 0.5 * g * math.log1p(-mu), 0
    while True:
        if x > max(upper, g * mu / (1 - mu)) and 2 * log_ground + 2 * n * math.log(x + 2) < math.log(1e-32):
            return x
        log_ground += 0.5 * math.log(mu * (x + g) / (x + 1))
        x += 1


def build_by_ladder(spec: FamilySpec, n: int, points: Iterable[Number], *, tolerance: float = 1e-9) -> NormalizedState:
    """psi_n from the ground state by n applications of the creation operator."""
    points = list(points)
    if n < 0 or (spec.max_index is not None and n > spec.max_index):
        raise InvalidParameterError(f"index {n} outside the range of {spec!r}")
    for point in points:
        if not spec.support.contains(point):
            raise OutsideSupportError(f"{point} is outside the support of {spec!r}")

    if spec.is_discrete:
        upper = max([int(p) for p in points] + [0])
        if spec.name is FamilyName.KRAVCHUK:
            extent = spec.param("N")
        else:
            extent = _meixner_extent(spec, n, upper)
        lattice = _discrete_ground(spec, extent)
        for k in range(n):
            lattice = _discrete_raise(spec, lattice, k)
        if not np.all(np.isfinite(lattice)):
            raise DegenerateParameterError(f"ladder construction of index {n} overflowed for {spec!r}")
        values = {p: float(lattice[int(p)]) for p in points}
        norm = math.fsum(lattice**2)
    else:
        q = _continuous_factors(make_family(spec.name, spec.params, exact=False), n)[n]
        values = {}
        for point in points:
            value = math.exp(0.5 * log_weight(spec, point)) * q(float(point))
            if not math.isfinite(value):
                raise DegenerateParameterError(f"ladder construction of index {n} overflowed at {point}")
            values[point] = value
        nodes, weights = gauss_rule(make_family(spec.name, spec.params, exact=False), n + 1)
        norm = float(np.sum(weights * np.array([q(float(t)) for t in nodes]) ** 2))

    state = NormalizedState(family=spec, n=n, values=values, norm_checked=abs(norm - 1.0) < tolerance)
    if not state.norm_checked:
        logger.warning("[LadderAlgebra] ladder state %d of %r has norm %.17g", n, spec, norm)
    return state
