from __future__ import annotations

from fractions import Fraction

import pytest

from rational_poly import RationalPoly, format_number


def test_trailing_zeros_are_trimmed() -> None:
    poly = RationalPoly([1, 2, 0, 0])

    assert poly.coeffs == (Fraction(1), Fraction(2))
    assert poly.degree == 1
    assert RationalPoly().degree == -1
    assert not RationalPoly([0, 0])


def test_arithmetic_is_exact() -> None:
    x = RationalPoly.x()
    p = (x - Fraction(1, 3)) * (x + Fraction(1, 3))

    assert p == RationalPoly([Fraction(-1, 9), 0, 1])
    assert (p / 3).coeffs == (Fraction(-1, 27), Fraction(0), Fraction(1, 3))
    assert 2 - x == RationalPoly([2, -1])
    assert p.evaluate(Fraction(1, 3)) == 0


def test_derivative_and_differences() -> None:
    x = RationalPoly.x()
    cube = x * x * x

    assert cube.derivative() == RationalPoly([0, 0, 3])
    assert cube.derivative(3) == RationalPoly([6])
    assert cube.forward_difference() == RationalPoly([1, 3, 3])
    assert cube.backward_difference() == RationalPoly([1, -3, 3])
    assert cube.shift(2).evaluate(1) == 27


def test_division_by_zero_and_polynomial_rejected() -> None:
    with pytest.raises(ZeroDivisionError):
        RationalPoly([1]) / 0
    with pytest.raises(TypeError):
        RationalPoly([1]) / RationalPoly([1])


def test_encoding_uses_num_den_strings() -> None:
    poly = RationalPoly([Fraction(-1, 2), 3])

    assert poly.encoded() == ["-1/2", "3/1"]
    assert format_number(0.25) == "0.25"
    assert RationalPoly(Fraction(v) for v in poly.encoded()) == poly


def test_float_view_keeps_values() -> None:
    poly = RationalPoly([Fraction(1, 4), Fraction(1, 2)]).to_float()

    assert not poly.is_exact
    assert poly(2.0) == pytest.approx(1.25)


def test_exact_results_stay_fractions() -> None:
    x = RationalPoly.x()
    p = ((x + Fraction(1, 2)) * (x - 3)).shift(Fraction(1, 3)).derivative()

    assert p.is_exact
    assert all(type(c) is Fraction for c in p.coeffs)
    assert p == RationalPoly([Fraction(-11, 6), 2])
    assert p.evaluate(Fraction(11, 12)) == 0


def test_float_path_matches_exact_path() -> None:
    exact = RationalPoly([Fraction(1, 3), Fraction(-2, 5), Fraction(1, 7)])
    floating = exact.to_float()

    for got, want in zip((floating * floating).shift(-1.5).coeffs, (exact * exact).shift(Fraction(-3, 2)).coeffs):
        assert isinstance(got, float)
        assert got == pytest.approx(float(want), rel=1e-14)
    assert (floating - floating).degree == -1
    assert floating.derivative(2).coeffs == pytest.approx((2 / 7,))
