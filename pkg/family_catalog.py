"""
Defining data of the hypergeometric polynomial families.

Each family is described by sigma (degree <= 2), tau (degree <= 1), its
weight, squared norms and three-term recurrence coefficients. The generic
formulas that derive eigenvalues and the shifted tau_n from sigma/tau live
here too, so every other module works only from a FamilySpec.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Union

from scipy.special import gammaln, poch

from rational_poly import Number, RationalPoly, format_number

logger = logging.getLogger(__name__)


class InvalidParameterError(ValueError):
    """Family parameters outside their admissible range."""


class OutsideSupportError(ValueError):
    """Evaluation point outside the family's support."""


class IndexRangeError(IndexError):
    """Polynomial index outside a finite family's range."""


class DegenerateParameterError(ArithmeticError):
    """A coefficient the construction divides by vanishes."""


class FamilyName(str, Enum):
    HERMITE = "hermite"
    LAGUERRE = "laguerre"
    KRAVCHUK = "kravchuk"
    MEIXNER = "meixner"


class FamilyKind(str, Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


PARAMETER_NAMES = {
    FamilyName.HERMITE: (),
    FamilyName.LAGUERRE: ("alpha",),
    FamilyName.KRAVCHUK: ("p", "N"),
    FamilyName.MEIXNER: ("gamma", "mu"),
}

ParamValue = Union[Fraction, float, int, str]


@dataclass(frozen=True)
class Support:
    """Interval (lower, upper) or integer range lower..upper (upper None = unbounded)."""

    discrete: bool
    lower: Number
    upper: Optional[Number]

    def contains(self, point: Number) -> bool:
        if self.discrete:
            if not _is_integer(point):
                return False
            if point < self.lower:
                return False
            return self.upper is None or point <= self.upper
        if self.lower is not None and not math.isinf(float(self.lower)) and point <= self.lower:
            return False
        if self.upper is not None and not math.isinf(float(self.upper)) and point >= self.upper:
            return False
        return True

    def describe(self) -> str:
        if self.discrete:
            upper = "inf" if self.upper is None else str(self.upper)
            return f"{{{self.lower},...,{upper}}}"
        return f"({self.lower},{self.upper})"


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """x*P_n = alpha_n P_{n+1} + beta_n P_n + gamma_n P_{n-1}."""

    alpha_n: Callable[[int], Number]
    beta_n: Callable[[int], Number]
    gamma_n: Callable[[int], Number]


@dataclass(frozen=True)
class FamilySpec:
    name: FamilyName
    kind: FamilyKind
    sigma: RationalPoly
    tau: RationalPoly
    support: Support
    exact: bool
    params: dict[str, Number] = field(default_factory=dict, hash=False)
    leading_norm_rule: str = "P0 = 1"

    @property
    def is_discrete(self) -> bool:
        return self.kind is FamilyKind.DISCRETE

    @property
    def max_index(self) -> Optional[int]:
        """Largest valid polynomial index, None for infinite families."""
        if self.name is FamilyName.KRAVCHUK:
            return int(self.params["N"])
        return None

    def param(self, name: str) -> Number:
        return self.params[name]

    def number(self, value: Number) -> Number:
        """Cast an integer or rational constant to this spec's arithmetic."""
        return Fraction(value) if self.exact else float(value)

    @property
    def recurrence(self) -> RecurrenceCoefficients:
        return recurrence_coefficients(self)

    def __repr__(self) -> str:
        shown = ", ".join(f"{k}={format_number(v)}" for k, v in self.params.items())
        return f"FamilySpec({self.name.value}{', ' + shown if shown else ''})"


def _is_integer(point: Number) -> bool:
    if isinstance(point, int):
        return True
    if isinstance(point, Fraction):
        return point.denominator == 1
    return float(point).is_integer()


def parse_number(text: ParamValue) -> Union[Fraction, float]:
    """Parse "num/den", integer or decimal text into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise InvalidParameterError("boolean is not a number")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"cannot parse number {text!r}") from exc


def _coerce_params(name: FamilyName, params: dict[str, ParamValue], exact: Optional[bool]) -> tuple[dict[str, Number], bool]:
    expected = PARAMETER_NAMES[name]
    unknown = set(params) - set(expected)
    if unknown:
        raise InvalidParameterError(f"unknown parameters for {name.value}: {sorted(unknown)}")
    missing = [p for p in expected if p not in params]
    if missing:
        raise InvalidParameterError(f"missing parameters for {name.value}: {missing}")

    values = {key: parse_number(value) for key, value in params.items()}
    if exact is None:
        exact = all(isinstance(v, Fraction) for v in values.values())
    if exact:
        values = {k: Fraction(v) for k, v in values.items()}
    else:
        values = {k: float(v) for k, v in values.items()}
    if "N" in values:
        if not _is_integer(values["N"]):
            raise InvalidParameterError(f"N must be an integer, got {values['N']}")
        values["N"] = int(values["N"])
    return values, exact


def match_difference_equation(coef_plus: RationalPoly, coef_minus: RationalPoly) -> tuple[RationalPoly, RationalPoly]:
    """Recover (sigma, tau) from an assembled difference equation.

    sigma*Delta*Nabla y + tau*Delta y + lambda*y expands to
    (sigma + tau) y(x+1) + sigma y(x-1) + (...) y(x), so the y(x-1)
    coefficient is sigma and the y(x+1) coefficient is sigma + tau.
    """
    sigma = coef_minus
    tau = coef_plus - coef_minus
    if sigma.degree > 2 or tau.degree > 1:
        raise InvalidParameterError("difference equation is not of hypergeometric type")
    return sigma, tau


def make_family(name: Union[FamilyName, str], params: Optional[dict[str, ParamValue]] = None, *, exact: Optional[bool] = None) -> FamilySpec:
    """Build a FamilySpec; exact defaults to True when every parameter is rational."""
    try:
        name = FamilyName(str(name.value if isinstance(name, FamilyName) else name).lower())
    except ValueError as exc:
        raise InvalidParameterError(f"unknown family {name!r}") from exc
    values, exact = _coerce_params(name, dict(params or {}), exact)
    one = Fraction(1) if exact else 1.0
    x = RationalPoly.x()

    if name is FamilyName.HERMITE:
        sigma = RationalPoly.constant(one)
        tau = RationalPoly.linear(0, -2 * one)
        support = Support(discrete=False, lower=-math.inf, upper=math.inf)
        kind = FamilyKind.CONTINUOUS
    elif name is FamilyName.LAGUERRE:
        alpha = values["alpha"]
        if not alpha > -1:
            raise InvalidParameterError(f"Laguerre alpha must exceed -1, got {alpha}")
        sigma = x * one
        tau = RationalPoly.linear(1 + alpha, -one)
        support = Support(discrete=False, lower=0, upper=math.inf)
        kind = FamilyKind.CONTINUOUS
    elif name is FamilyName.KRAVCHUK:
        p, n_size = values["p"], values["N"]
        if not 0 < p < 1:
            raise InvalidParameterError(f"Kravchuk p must lie in (0,1), got {p}")
        if n_size < 1:
            raise InvalidParameterError(f"Kravchuk N must be >= 1, got {n_size}")
        q = one - p
        sigma = x * one
        tau = RationalPoly.linear(n_size * p / q, -one / q)
        support = Support(discrete=True, lower=0, upper=n_size)
        kind = FamilyKind.DISCRETE
    else:
        gamma, mu = values["gamma"], values["mu"]
        if not gamma > 0:
            raise InvalidParameterError(f"Meixner gamma must be positive, got {gamma}")
        if not 0 < mu < 1:
            raise InvalidParameterError(f"Meixner mu must lie in (0,1), got {mu}")
        # (D1): mu(x+gamma) y(x+1) + x y(x-1) - [mu(x+n+gamma) + x - n] y(x) = 0
        sigma, tau = match_difference_equation(
            coef_plus=RationalPoly.linear(mu * gamma, mu),
            coef_minus=x * one,
        )
        support = Support(discrete=True, lower=0, upper=None)
        kind = FamilyKind.DISCRETE

    spec = FamilySpec(name=name, kind=kind, sigma=sigma, tau=tau, support=support, exact=exact, params=values)
    logger.debug("[FamilyCatalog] made %r sigma=%s tau=%s", spec, sigma, tau)
    return spec


def recurrence_coefficients(spec: FamilySpec) -> RecurrenceCoefficients:
    num = spec.number
    if spec.name is FamilyName.HERMITE:
        return RecurrenceCoefficients(
            alpha_n=lambda n: num(Fraction(1, 2)),
            beta_n=lambda n: num(0),
            gamma_n=lambda n: num(n),
        )
    if spec.name is FamilyName.LAGUERRE:
        a = spec.param("alpha")
        return RecurrenceCoefficients(
            alpha_n=lambda n: -num(n + 1),
            beta_n=lambda n: 2 * n + a + 1,
            gamma_n=lambda n: -(n + a),
        )
    if spec.name is FamilyName.KRAVCHUK:
        p, n_size = spec.param("p"), spec.param("N")
        q = 1 - p
        return RecurrenceCoefficients(
            alpha_n=lambda n: num(n + 1),
            beta_n=lambda n: n + p * (n_size - 2 * n),
            gamma_n=lambda n: p * q * (n_size - n + 1),
        )
    g, mu = spec.param("gamma"), spec.param("mu")
    return RecurrenceCoefficients(
        alpha_n=lambda n: mu / (mu - 1),
        beta_n=lambda n: (n + mu * (n + g)) / (1 - mu),
        gamma_n=lambda n: n * (n + g - 1) / (mu - 1),
    )


def tau_prime(spec: FamilySpec) -> Number:
    return spec.tau.coefficient(1)


def sigma_second(spec: FamilySpec) -> Number:
    return 2 * spec.sigma.coefficient(2)


def lambda_over_n(spec: FamilySpec, n: int) -> Number:
    """lambda_n / n as the polynomial -(tau' + (n-1)/2 sigma''), defined at n = 0."""
    return -(tau_prime(spec) + Fraction(n - 1, 2) * sigma_second(spec))


def lambda_n(spec: FamilySpec, n: int) -> Number:
    if n < 0:
        raise IndexRangeError(f"eigenvalue index must be >= 0, got {n}")
    return n * lambda_over_n(spec, n)


def tau_n_poly(spec: FamilySpec, n: int) -> RationalPoly:
    if spec.is_discrete:
        return spec.tau.shift(n) + spec.sigma.shift(n) - spec.sigma
    return spec.tau + spec.sigma.derivative() * n


def tau_n(spec: FamilySpec, n: int, point: Number) -> Number:
    return tau_n_poly(spec, n).evaluate(point)


def _check_point(spec: FamilySpec, point: Number) -> None:
    if not spec.support.contains(point):
        raise OutsideSupportError(f"{point} is outside the support {spec.support.describe()} of {spec!r}")


def pochhammer(a: Number, k: int) -> Number:
    """Rising factorial (a)_k; exact for Fraction arguments."""
    if not isinstance(a, Fraction):
        return float(poch(a, k))
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def weight(spec: FamilySpec, point: Number) -> Number:
    """rho(point); exact Fraction for rational discrete families."""
    _check_point(spec, point)
    if spec.name is FamilyName.HERMITE:
        return math.exp(-float(point) ** 2)
    if spec.name is FamilyName.LAGUERRE:
        s = float(point)
        return s ** float(spec.param("alpha")) * math.exp(-s)
    x = int(point)
    if spec.name is FamilyName.KRAVCHUK:
        p, n_size = spec.param("p"), spec.param("N")
        return math.comb(n_size, x) * p**x * (1 - p) ** (n_size - x)
    mu, g = spec.param("mu"), spec.param("gamma")
    return mu**x * pochhammer(g, x) / math.factorial(x)


def log_weight(spec: FamilySpec, point: Number) -> float:
    """log rho(point) in floating point, usable far out on discrete supports."""
    _check_point(spec, point)
    if spec.name is FamilyName.HERMITE:
        return -float(point) ** 2
    if spec.name is FamilyName.LAGUERRE:
        s = float(point)
        return float(spec.param("alpha")) * math.log(s) - s
    x = float(point)
    if spec.name is FamilyName.KRAVCHUK:
        p, n_size = float(spec.param("p")), spec.param("N")
        return float(
            gammaln(n_size + 1) - gammaln(x + 1) - gammaln(n_size - x + 1)
            + x * math.log(p) + (n_size - x) * math.log1p(-p)
        )
    mu, g = float(spec.param("mu")), float(spec.param("gamma"))
    return float(x * math.log(mu) + gammaln(g + x) - gammaln(x + 1) - gammaln(g))


def log_weight_derivatives(spec: FamilySpec, s: float) -> tuple[float, float]:
    """First and second derivative of log rho for the continuous families."""
    if spec.name is FamilyName.HERMITE:
        return -2.0 * s, -2.0
    if spec.name is FamilyName.LAGUERRE:
        a = float(spec.param("alpha"))
        if s <= 0:
            raise DegenerateParameterError("Laguerre weight derivatives are singular at s <= 0")
        return a / s - 1.0, -a / s**2
    raise ValueError(f"{spec.name.value} has no continuous weight")


def _check_index(spec: FamilySpec, n: int) -> None:
    if n < 0 or (spec.max_index is not None and n > spec.max_index):
        raise IndexRangeError(f"index {n} outside the range of {spec!r}")


def relative_squared_norm(spec: FamilySpec, n: int) -> Number:
    """d_n^2 / d_0^2, rational for every rational-parameter family."""
    _check_index(spec, n)
    num = spec.number
    if spec.name is FamilyName.HERMITE:
        return num(2**n * math.factorial(n))
    if spec.name is FamilyName.LAGUERRE:
        return pochhammer(spec.param("alpha") + 1, n) / math.factorial(n)
    if spec.name is FamilyName.KRAVCHUK:
        p = spec.param("p")
        return math.comb(spec.param("N"), n) * (p * (1 - p)) ** n
    g, mu = spec.param("gamma"), spec.param("mu")
    return math.factorial(n) * pochhammer(g, n) / mu**n


def total_mass(spec: FamilySpec) -> Number:
    """d_0^2: sum or integral of the weight over the support."""
    if spec.name is FamilyName.HERMITE:
        return math.sqrt(math.pi)
    if spec.name is FamilyName.LAGUERRE:
        return math.gamma(float(spec.param("alpha")) + 1)
    if spec.name is FamilyName.KRAVCHUK:
        return spec.number(1)
    g, mu = spec.param("gamma"), spec.param("mu")
    if spec.exact and g.denominator == 1:
        return (1 - mu) ** (-int(g))
    return float(1 - mu) ** (-float(g))


def squared_norm(spec: FamilySpec, n: int) -> Number:
    return relative_squared_norm(spec, n) * total_mass(spec)


def log_squared_norm(spec: FamilySpec, n: int) -> float:
    _check_index(spec, n)
    if spec.name is FamilyName.HERMITE:
        return n * math.log(2.0) + float(gammaln(n + 1)) + 0.5 * math.log(math.pi)
    if spec.name is FamilyName.LAGUERRE:
        a = float(spec.param("alpha"))
        return float(gammaln(n + a + 1) - gammaln(n + 1))
    if spec.name is FamilyName.KRAVCHUK:
        p, n_size = float(spec.param("p")), spec.param("N")
        return float(
            gammaln(n_size + 1) - gammaln(n + 1) - gammaln(n_size - n + 1)
            + n * (math.log(p) + math.log1p(-p))
        )
    g, mu = float(spec.param("gamma")), float(spec.param("mu"))
    return float(gammaln(n + 1) + gammaln(g + n) - gammaln(g) - n * math.log(mu) - g * math.log1p(-mu))


def _weight_or_zero(spec: FamilySpec, x: int) -> Number:
    return weight(spec, x) if spec.support.contains(x) else spec.number(0)


def pearson_residual(spec: FamilySpec, point: Number) -> Number:
    """(sigma rho)' - tau rho, or Delta(sigma rho) - tau rho on discrete supports."""
    _check_point(spec, point)
    if spec.is_discrete:
        x = int(point)
        return (
            spec.sigma(x + 1) * _weight_or_zero(spec, x + 1)
            - spec.sigma(x) * weight(spec, x)
            - spec.tau(x) * weight(spec, x)
        )
    s = float(point)
    rho = weight(spec, s)
    dlog, _ = log_weight_derivatives(spec, s)
    sigma = spec.sigma.to_float()
    return rho * (sigma.derivative()(s) + sigma(s) * dlog - spec.tau.to_float()(s))


def family_descriptor(spec: FamilySpec):
    from report_models import FamilyDescriptor

    return FamilyDescriptor(
        name=spec.name.value,
        kind=spec.kind.value,
        params={k: format_number(v) for k, v in spec.params.items()},
        sigma=[format_number(spec.sigma.coefficient(k)) for k in range(3)],
        tau=[format_number(spec.tau.coefficient(k)) for k in range(2)],
        support=spec.support.describe(),
    )
