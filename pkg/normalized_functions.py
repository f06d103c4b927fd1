"""
Normalized functions psi_n = d_n^{-1} sqrt(rho) P_n, the Wigner d-functions
obtained from the Kravchuk family, and the residual checks of their
difference/differential relations.

Values of P_n are taken from the exact polynomial sequence and cast to
float only when combined with sqrt(rho) and d_n, which are handled in
log-space so that wide discrete supports do not overflow.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

import numpy as np

from family_catalog import (
    DegenerateParameterError,
    FamilyName,
    FamilySpec,
    InvalidParameterError,
    OutsideSupportError,
    log_squared_norm,
    log_weight,
    log_weight_derivatives,
    make_family,
)
from poly_engine import PolySeq, build_by_recurrence, evaluate_poly, gauss_rule
from rational_poly import Number

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    ND1 = "ND1"
    ND2 = "ND2"
    ND3 = "ND3"
    ND4 = "ND4"
    NC1 = "NC1"
    NC1_PRINTED = "NC1_PRINTED"
    NC2 = "NC2"
    NC3 = "NC3"
    NC4 = "NC4"


@dataclass
class NormalizedState:
    family: FamilySpec
    n: int
    values: dict[Number, float] = field(default_factory=dict)
    norm_checked: bool = False


@lru_cache(maxsize=2048)
def _sequence(spec: FamilySpec, n_max: int) -> PolySeq:
    return build_by_recurrence(spec, n_max)


def polynomial(spec: FamilySpec, n: int):
    return _sequence(spec, n).polys[n]


def _poly_value(spec: FamilySpec, n: int, point: Number, order: int = 0) -> float:
    poly = polynomial(spec, n)
    if order:
        poly = poly.derivative(order)
    return float(evaluate_poly(poly, point))


def psi(spec: FamilySpec, n: int, point: Number) -> float:
    """d_n^{-1} sqrt(rho(point)) P_n(point); the phase follows the sign of P_n."""
    if not spec.support.contains(point):
        raise OutsideSupportError(f"{point} is outside the support of {spec!r}")
    value = _poly_value(spec, n, point)
    if value == 0.0:
        return 0.0
    log_amplitude = 0.5 * (log_weight(spec, point) - log_squared_norm(spec, n)) + math.log(abs(value))
    return math.copysign(math.exp(log_amplitude), value)


def psi_or_zero(spec: FamilySpec, n: int, point: Number) -> float:
    """psi with zero outside the index range or the support (vanishing boundary terms)."""
    if n < 0 or (spec.max_index is not None and n > spec.max_index):
        return 0.0
    if not spec.support.contains(point):
        return 0.0
    return psi(spec, n, point)


def psi_derivatives(spec: FamilySpec, n: int, s: float) -> tuple[float, float, float]:
    """(psi, psi', psi'') for a continuous family from the product form."""
    if spec.is_discrete:
        raise ValueError("derivatives are defined for continuous families only")
    if not spec.support.contains(s):
        raise OutsideSupportError(f"{s} is outside the support of {spec!r}")
    dlog, d2log = log_weight_derivatives(spec, s)
    g1, g2 = 0.5 * dlog, 0.5 * d2log
    amplitude = math.exp(0.5 * (log_weight(spec, s) - log_squared_norm(spec, n)))
    p0, p1, p2 = (_poly_value(spec, n, s, order) for order in range(3))
    return (
        amplitude * p0,
        amplitude * (g1 * p0 + p1),
        amplitude * ((g2 + g1 * g1) * p0 + 2 * g1 * p1 + p2),
    )


def _scaled(terms: Iterable[float]) -> float:
    terms = list(terms)
    return sum(terms) / max(1.0, max(abs(t) for t in terms))


def normalized_state(spec: FamilySpec, n: int, points: Iterable[Number], *, check_norm: bool = True, tolerance: float = 1e-10) -> NormalizedState:
    state = NormalizedState(family=spec, n=n, values={p: psi(spec, n, p) for p in points})
    if check_norm:
        norm = state_norm(spec, n)
        state.norm_checked = abs(norm - 1.0) < tolerance
        if not state.norm_checked:
            logger.warning("[NormalizedFunctions] psi_%d of %r has norm %.17g", n, spec, norm)
    return state


def state_norm(spec: FamilySpec, n: int, *, tail: float = 1e-30) -> float:
    """<psi_n, psi_n> over the full support (quadrature on continuous ones)."""
    if spec.name is FamilyName.KRAVCHUK:
        return math.fsum(psi(spec, n, x) ** 2 for x in range(spec.param("N") + 1))
    if spec.name is FamilyName.MEIXNER:
        total, x = [], 0
        mode = float(spec.param("gamma")) * float(spec.param("mu")) / (1 - float(spec.param("mu")))
        while True:
            term = psi(spec, n, x) ** 2
            total.append(term)
            if x > mode + n and term < tail:
                return math.fsum(total)
            x += 1
    nodes, weights = gauss_rule(make_family(spec.name, spec.params, exact=False), n + 1)
    poly = polynomial(spec, n).to_float()
    values = np.array([poly(float(t)) for t in nodes])
    return float(np.sum(weights * values**2) / math.exp(log_squared_norm(spec, n)))


# --- Wigner d-functions -------------------------------------------------------


@dataclass(frozen=True)
class WignerIndex:
    j: Fraction
    m: Fraction
    mp: Fraction
    beta: float

    def __post_init__(self) -> None:
        for name in ("j", "m", "mp"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, name, Fraction(str(value)))
        if self.j < 0 or (2 * self.j).denominator != 1:
            raise InvalidParameterError(f"j must be a non-negative half-integer, got {self.j}")
        for name in ("m", "mp"):
            offset = self.j - getattr(self, name)
            if offset.denominator != 1:
                raise InvalidParameterError(f"j - {name} must be an integer (j={self.j}, {name}={getattr(self, name)})")
            if not 0 <= offset <= 2 * self.j:
                raise InvalidParameterError(f"|{name}| must not exceed j (j={self.j}, {name}={getattr(self, name)})")
        if not 0 <= self.beta < math.pi:
            raise InvalidParameterError(f"beta must lie in [0, pi), got {self.beta}")

    @property
    def N(self) -> int:
        return int(2 * self.j)

    @property
    def n(self) -> int:
        return int(self.j - self.m)

    @property
    def x(self) -> int:
        return int(self.j - self.mp)

    @property
    def p(self) -> float:
        return math.sin(self.beta / 2) ** 2


@lru_cache(maxsize=512)
def wigner_family(j: Fraction, beta: float) -> FamilySpec:
    """Kravchuk family with N = 2j and p = sin^2(beta/2) held exactly."""
    return make_family(FamilyName.KRAVCHUK, {"p": Fraction(math.sin(beta / 2) ** 2), "N": int(2 * j)}, exact=True)


@lru_cache(maxsize=65536)
def wigner_d(idx: WignerIndex) -> float:
    """d^j_{m,m'}(beta) = (-1)^{m-m'} psi_n(x) with n = j-m, x = j-m'."""
    if idx.beta == 0.0 or idx.j == 0:
        return 1.0 if idx.m == idx.mp else 0.0
    spec = wigner_family(idx.j, idx.beta)
    sign = -1.0 if (idx.m - idx.mp) % 2 else 1.0
    return sign * psi(spec, idx.n, idx.x)


def _d(j: Fraction, m: Fraction, mp: Fraction, beta: float) -> float:
    if abs(m) > j or abs(mp) > j:
        return 0.0
    return wigner_d(WignerIndex(j, m, mp, beta))


def wigner_matrix(j: Union[Fraction, float, str], beta: float) -> np.ndarray:
    """Rows m = j..-j, columns m' = j..-j."""
    j = Fraction(str(j))
    ms = [j - k for k in range(int(2 * j) + 1)]
    return np.array([[_d(j, m, mp, beta) for mp in ms] for m in ms])


def nd_residual(relation: Union[Relation, str], idx: WignerIndex, *, reading: str = "symmetric") -> float:
    """Residual of (ND1)-(ND4) in the (j, m, m') parameterization."""
    relation = Relation(relation)
    j, m, mp, beta = idx.j, idx.m, idx.mp, idx.beta
    sin_b, cos_b = math.sin(beta), math.cos(beta)
    half_sin = 0.5 * sin_b
    sin2_half = math.sin(beta / 2) ** 2

    def root(a: Fraction, b: Fraction) -> float:
        return math.sqrt(float(a * b))

    center = _d(j, m, mp, beta)
    if relation in (Relation.ND1, Relation.ND2) and sin_b == 0.0:
        raise DegenerateParameterError("ND1/ND2 prefactor 2/sin(beta) is singular at sin(beta) = 0")
    if relation is Relation.ND1:
        return (
            root(j + mp, j - mp + 1) * _d(j, m, mp - 1, beta)
            + (2 / sin_b) * (float(m) - float(mp) * cos_b) * center
            + root(j - mp, j + mp + 1) * _d(j, m, mp + 1, beta)
        )
    if relation is Relation.ND2:
        upper = _d(j, m + 1, m, beta) if reading == "printed" else _d(j, m + 1, mp, beta)
        return (
            root(j + m, j - m + 1) * _d(j, m - 1, mp, beta)
            - (2 / sin_b) * (float(mp) - float(m) * cos_b) * center
            + root(j - m, j + m + 1) * upper
        )
    if relation is Relation.ND3:
        return (
            half_sin * root(j + m, j - m + 1) * _d(j, m - 1, mp, beta)
            - sin2_half * float(m + mp) * center
            - half_sin * root(j - mp, j + mp + 1) * _d(j, m, mp + 1, beta)
        )
    if relation is Relation.ND4:
        return (
            half_sin * root(j - m, j + m + 1) * _d(j, m + 1, mp, beta)
            - sin2_half * float(m + mp) * center
            - half_sin * root(j + mp, j - mp + 1) * _d(j, m, mp - 1, beta)
        )
    raise ValueError(f"{relation.value} is not a discrete relation")


def kravchuk_nd_residual(relation: Union[Relation, str], n: int, x: int, N: int, p: float) -> float:
    """Residual of (ND1)-(ND4) in the Kravchuk parameterization d^j_{j-n, j-x}."""
    relation = Relation(relation)
    beta = 2 * math.asin(math.sqrt(p))
    q = 1 - p
    j = Fraction(N, 2)

    def D(a: int, b: int) -> float:
        return _d(j, j - a, j - b, beta)

    pq = p * q
    center = D(n, x)
    if relation is Relation.ND1:
        return (
            math.sqrt(pq * (N - x) * (x + 1)) * D(n, x + 1)
            + (p * (N - x - n) + q * (x - n)) * center
            + math.sqrt(pq * x * (N - x + 1)) * D(n, x - 1)
        )
    if relation is Relation.ND2:
        return (
            (-p * (N - x - n) - q * (n - x)) * center
            + math.sqrt(pq * (n + 1) * (N - n)) * D(n + 1, x)
            + math.sqrt(pq * n * (N - n + 1)) * D(n - 1, x)
        )
    if relation is Relation.ND3:
        return (
            math.sqrt(pq * (n + 1) * (N - n)) * D(n + 1, x)
            - p * (N - x - n) * center
            - math.sqrt(pq * x * (N - x + 1)) * D(n, x - 1)
        )
    if relation is Relation.ND4:
        return (
            math.sqrt(pq * n * (N - n + 1)) * D(n - 1, x)
            - p * (N - x - n) * center
            - math.sqrt(pq * (x + 1) * (N - x)) * D(n, x + 1)
        )
    raise ValueError(f"{relation.value} is not a discrete relation")


def meixner_nd_residual(relation: Union[Relation, str], n: int, x: int, gamma: Number, mu: Number) -> float:
    """Residual of the normalized Meixner (ND1)-(ND4) at index n, point x."""
    relation = Relation(relation)
    spec = make_family(FamilyName.MEIXNER, {"gamma": gamma, "mu": mu})
    g, mu = float(spec.param("gamma")), float(spec.param("mu"))
    M = lambda k, y: psi_or_zero(spec, k, y)  # noqa: E731
    center = M(n, x)
    up_x = math.sqrt(mu * (g + x) * (x + 1))
    down_x = math.sqrt(mu * x * (x + g - 1)) if x > 0 else 0.0
    up_n = math.sqrt(mu * (g + n) * (n + 1))
    down_n = math.sqrt(mu * n * (n + g - 1)) if n > 0 else 0.0
    if relation is Relation.ND1:
        return _scaled([up_x * M(n, x + 1), down_x * M(n, x - 1), -(mu * (x + n + g) - n + x) * center])
    if relation is Relation.ND2:
        return _scaled([up_n * M(n + 1, x), down_n * M(n - 1, x), -(mu * (x + n + g) - x + n) * center])
    if relation is Relation.ND3:
        return _scaled([up_n * M(n + 1, x), -mu * (x + n + g) * center, down_x * M(n, x - 1)])
    if relation is Relation.ND4:
        return _scaled([down_n * M(n - 1, x), -mu * (x + n + g) * center, up_x * M(n, x + 1)])
    raise ValueError(f"{relation.value} is not a discrete relation")


# --- continuous relations -----------------------------------------------------


def nc_residual(spec: FamilySpec, relation: Union[Relation, str], n: int, s: float) -> float:
    """Residual of (NC1)-(NC4) for Hermite or Laguerre, relative to the largest term (floored at 1)."""
    relation = Relation(relation)
    if spec.name not in (FamilyName.HERMITE, FamilyName.LAGUERRE):
        raise InvalidParameterError(f"continuous relations are defined for Hermite and Laguerre, not {spec.name.value}")
    if n < 0:
        raise InvalidParameterError("n must be >= 0")
    f0, f1, f2 = psi_derivatives(spec, n, s)
    up = psi(spec, n + 1, s)
    down = psi(spec, n - 1, s) if n > 0 else 0.0

    if spec.name is FamilyName.HERMITE:
        terms = {
            Relation.NC1: [f2, (2 * n + 1 - s * s) * f0],
            Relation.NC2: [2 * s * f0, -math.sqrt(2 * (n + 1)) * up, -math.sqrt(2 * n) * down],
            Relation.NC3: [math.sqrt(n + 1) * up, -s * f0 / math.sqrt(2), f1 / math.sqrt(2)],
            Relation.NC4: [math.sqrt(n) * down, -s * f0 / math.sqrt(2), -f1 / math.sqrt(2)],
        }
    else:
        a = float(spec.param("alpha"))
        terms = {
            Relation.NC1: [s * s * f2, s * f1, 0.25 * (-s * s - a * a + 2 * (a + 1) * s) * f0, n * s * f0],
            Relation.NC1_PRINTED: [s * s * f2, s * f1, 0.5 * (-s * s - a * a + a * s + s) * f0, n * s * f0],
            Relation.NC2: [
                math.sqrt((n + 1) * (n + a + 1)) * up,
                math.sqrt(n * (n + a)) * down,
                -(2 * n + a + 1 - s) * f0,
            ],
            Relation.NC3: [math.sqrt((n + 1) * (n + a + 1)) * up, -0.5 * (2 * n + a + 2 - s) * f0, -s * f1],
            Relation.NC4: [math.sqrt(n * (n + a)) * down, -0.5 * (2 * n + a - s) * f0, s * f1],
        }
    if relation not in terms:
        raise ValueError(f"{relation.value} is not defined for {spec.name.value}")
    return _scaled(terms[relation])


@lru_cache(maxsize=64)
def _hydrogen_family(l: int) -> FamilySpec:
    return make_family(FamilyName.LAGUERRE, {"alpha": Fraction(2 * l + 1)})


def hydrogen_residual(n: int, l: int, s: float) -> float:
    """Residual of psi'' - rho1^{-1/2}(rho1^{1/2})'' psi + (n-l-1) psi / s with rho1 = s^{2l+2} e^{-s}."""
    if not n > l >= 0:
        raise InvalidParameterError(f"need n > l >= 0, got n={n}, l={l}")
    if s <= 0:
        raise DegenerateParameterError("hydrogen equation is defined for s > 0")
    k = n - l - 1
    spec = _hydrogen_family(l)
    g1 = (l + 1) / s - 0.5
    g2 = -(l + 1) / s**2
    envelope = math.exp((l + 1) * math.log(s) - 0.5 * s)
    p0, p1, p2 = (_poly_value(spec, k, s, order) for order in range(3))
    value = envelope * p0
    second = envelope * ((g2 + g1 * g1) * p0 + 2 * g1 * p1 + p2)
    potential = (g2 + g1 * g1) * value
    return _scaled([second, -potential, k * value / s])


def hydrogen_orthogonality(l: int, ns: Iterable[int]) -> np.ndarray:
    """Matrix of <psi_a, psi_b> with weight 1/s for the hydrogen functions of angular index l."""
    ns = list(ns)
    for n in ns:
        if not n > l >= 0:
            raise InvalidParameterError(f"need n > l >= 0, got n={n}, l={l}")
    degrees = [n - l - 1 for n in ns]
    spec = _hydrogen_family(l)
    nodes, weights = gauss_rule(make_family(FamilyName.LAGUERRE, {"alpha": float(2 * l + 1)}), max(degrees) + 1)
    values = np.array([[float(evaluate_poly(polynomial(spec, k), float(t))) for t in nodes] for k in degrees])
    return (values * weights) @ values.T


def tabulate_psi(spec: FamilySpec, n_max: int, points: Iterable[Number]) -> list[tuple[str, int, float, float]]:
    """Rows (family, n, point, value)."""
    points = list(points)
    rows = []
    for n in range(n_max + 1):
        for point in points:
            rows.append((spec.name.value, n, float(point), psi(spec, n, point)))
    return rows


def tabulate_wigner(j: Union[Fraction, float, str], betas: Iterable[float]) -> list[tuple[float, float, float, float, float]]:
    """Rows (j, m, m', beta, value) over every m, m' for each beta."""
    j = Fraction(str(j))
    ms = [j - k for k in range(int(2 * j) + 1)]
    rows = []
    for beta in betas:
        for m in ms:
            for mp in ms:
                rows.append((float(j), float(m), float(mp), float(beta), wigner_d(WignerIndex(j, m, mp, beta))))
    logger.info("[NormalizedFunctions] tabulated %d d-matrix entries for j=%s", len(rows), j)
    return rows
