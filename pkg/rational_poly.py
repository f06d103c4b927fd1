"""
Exact polynomial arithmetic over the rationals.

Coefficients are stored lowest degree first as `Fraction`s on the exact path
and the ring operations run on sympy's dense univariate routines over QQ.
Float coefficients are accepted so the same type serves the float path; those
polynomials go through `numpy.polynomial` instead.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from sympy.polys.densearith import dup_add, dup_mul, dup_mul_ground, dup_neg, dup_quo_ground, dup_sub
from sympy.polys.densetools import dup_diff, dup_eval, dup_shift
from sympy.polys.domains import QQ

Number = Union[Fraction, float, int]


def as_exact(value: Number) -> Number:
    """Promote ints to Fraction, leave Fractions and floats untouched."""
    if isinstance(value, bool):
        raise TypeError("booleans are not polynomial coefficients")
    if isinstance(value, int):
        return Fraction(value)
    return value


def format_number(value: Number) -> str:
    """Encode a rational as "num/den" (floats as their repr)."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return f"{value}/1"
    return repr(float(value))


def _qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class RationalPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()) -> None:
        values = [as_exact(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.coeffs: tuple[Number, ...] = tuple(values)

    @classmethod
    def _from_dup(cls, f: list) -> "RationalPoly":
        # dup lists are highest degree first and already stripped
        poly = cls.__new__(cls)
        poly.coeffs = tuple(_fraction(c) for c in reversed(f))
        return poly

    @classmethod
    def _from_floats(cls, values) -> "RationalPoly":
        return cls(float(c) for c in np.atleast_1d(values))

    @classmethod
    def constant(cls, value: Number) -> "RationalPoly":
        return cls([value])

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @classmethod
    def linear(cls, c0: Number, c1: Number) -> "RationalPoly":
        return cls([c0, c1])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Number:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def _dup(self) -> list:
        return [_qq(c) for c in reversed(self.coeffs)]

    def _floats(self) -> list[float]:
        return [float(c) for c in self.coeffs] or [0.0]

    def coefficient(self, k: int) -> Number:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __repr__(self) -> str:
        return f"RationalPoly({[format_number(c) for c in self.coeffs]})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float, Fraction)):
            other = RationalPoly([other])
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _coerce(self, other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, (int, float, Fraction)):
            return RationalPoly([other])
        return NotImplemented

    def __add__(self, other) -> "RationalPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return RationalPoly._from_dup(dup_add(self._dup(), other._dup(), QQ))
        return RationalPoly._from_floats(npoly.polyadd(self._floats(), other._floats()))

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        if self.is_exact:
            return RationalPoly._from_dup(dup_neg(self._dup(), QQ))
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RationalPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return RationalPoly._from_dup(dup_sub(self._dup(), other._dup(), QQ))
        return RationalPoly._from_floats(npoly.polysub(self._floats(), other._floats()))

    def __rsub__(self, other) -> "RationalPoly":
        return (-self) + other

    def __mul__(self, other) -> "RationalPoly":
        if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
            other = as_exact(other)
            if self.is_exact and isinstance(other, Fraction):
                return RationalPoly._from_dup(dup_mul_ground(self._dup(), _qq(other), QQ))
            return RationalPoly._from_floats(np.asarray(self._floats()) * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return RationalPoly._from_dup(dup_mul(self._dup(), other._dup(), QQ))
        return RationalPoly._from_floats(npoly.polymul(self._floats(), other._floats()))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number) -> "RationalPoly":
        if isinstance(scalar, RationalPoly):
            raise TypeError("polynomial division is not supported")
        if scalar == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        scalar = as_exact(scalar)
        if self.is_exact and isinstance(scalar, Fraction):
            return RationalPoly._from_dup(dup_quo_ground(self._dup(), _qq(scalar), QQ))
        return RationalPoly._from_floats(np.asarray(self._floats()) / float(scalar))

    def derivative(self, order: int = 1) -> "RationalPoly":
        if order == 0:
            return self
        if self.is_exact:
            return RationalPoly._from_dup(dup_diff(self._dup(), order, QQ))
        return RationalPoly._from_floats(npoly.polyder(self._floats(), order))

    def shift(self, k: Number) -> "RationalPoly":
        """Return the polynomial x -> p(x + k)."""
        k = as_exact(k)
        if self.is_exact and isinstance(k, Fraction):
            return RationalPoly._from_dup(dup_shift(self._dup(), _qq(k), QQ))
        result = np.zeros(1)
        for c in reversed(self._floats()):
            result = npoly.polyadd(npoly.polymul(result, [float(k), 1.0]), [c])
        return RationalPoly._from_floats(result)

    def forward_difference(self) -> "RationalPoly":
        return self.shift(1) - self

    def backward_difference(self) -> "RationalPoly":
        return self - self.shift(-1)

    def __call__(self, point: Number) -> Number:
        return self.evaluate(point)

    def evaluate(self, point: Number) -> Number:
        """Exact over QQ when point and coefficients are rational, float Horner otherwise."""
        point = as_exact(point)
        if self.is_exact and isinstance(point, Fraction):
            return _fraction(dup_eval(self._dup(), _qq(point), QQ))
        return float(npoly.polyval(float(point), self._floats()))

    def to_float(self) -> "RationalPoly":
        poly = RationalPoly()
        poly.coeffs = tuple(float(c) for c in self.coeffs)
        return poly

    def encoded(self) -> list[str]:
        return [format_number(c) for c in self.coeffs]
