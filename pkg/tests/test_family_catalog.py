from __future__ import annotations

import math
from fractions import Fraction

import pytest

from family_catalog import (
    FamilyKind,
    IndexRangeError,
    InvalidParameterError,
    OutsideSupportError,
    family_descriptor,
    lambda_n,
    lambda_over_n,
    make_family,
    match_difference_equation,
    parse_number,
    pearson_residual,
    pochhammer,
    squared_norm,
    tau_n,
    weight,
)
from rational_poly import RationalPoly


def test_kravchuk_sigma_tau_and_eigenvalues(kravchuk_half_4) -> None:
    spec = kravchuk_half_4

    assert spec.kind is FamilyKind.DISCRETE
    assert spec.sigma == RationalPoly([0, 1])
    assert spec.tau == RationalPoly([4, -2])
    assert [lambda_n(spec, n) for n in range(5)] == [0, 2, 4, 6, 8]
    assert spec.max_index == 4


def test_hermite_sigma_tau_and_eigenvalues(hermite) -> None:
    assert hermite.sigma == RationalPoly([1])
    assert hermite.tau == RationalPoly([0, -2])
    assert [lambda_n(hermite, n) for n in range(6)] == [2 * n for n in range(6)]


def test_meixner_reconstructed_from_difference_equation(meixner_half) -> None:
    assert meixner_half.sigma == RationalPoly([0, 1])
    assert meixner_half.tau == RationalPoly([Fraction(1, 2), Fraction(-1, 2)])


def test_match_difference_equation_reads_sigma_from_backward_coefficient() -> None:
    sigma, tau = match_difference_equation(RationalPoly([3, 2]), RationalPoly([0, 1]))

    assert sigma == RationalPoly([0, 1])
    assert tau == RationalPoly([3, 1])
    with pytest.raises(InvalidParameterError):
        match_difference_equation(RationalPoly([0, 0, 0, 1]), RationalPoly([0, 1]))


def test_lambda_zero_for_every_family() -> None:
    specs = [
        make_family("hermite"),
        make_family("laguerre", {"alpha": Fraction(1, 2)}),
        make_family("kravchuk", {"p": Fraction(1, 3), "N": 5}),
        make_family("meixner", {"gamma": 2, "mu": Fraction(1, 4)}),
    ]
    for spec in specs:
        assert lambda_n(spec, 0) == 0


def test_kravchuk_lambda_three() -> None:
    spec = make_family("kravchuk", {"p": Fraction(1, 2), "N": 6})

    assert lambda_n(spec, 3) == 6


def test_tau_n_matches_closed_forms(kravchuk_half_4, hermite) -> None:
    p, q, N = Fraction(1, 2), Fraction(1, 2), 4
    for n in range(4):
        for x in range(5):
            assert tau_n(kravchuk_half_4, n, x) == (N * p - x - n) / q + n
    assert tau_n(kravchuk_half_4, 0, 3) == kravchuk_half_4.tau(3)
    for n in range(4):
        assert tau_n(hermite, n, Fraction(3, 2)) == -3


def test_weights_on_support(kravchuk_half_4, meixner_half, hermite) -> None:
    assert weight(meixner_half, 2) == Fraction(1, 4)
    assert weight(hermite, 0) == 1.0
    assert weight(kravchuk_half_4, 1) == Fraction(1, 4)
    with pytest.raises(OutsideSupportError):
        weight(kravchuk_half_4, 5)
    with pytest.raises(OutsideSupportError):
        weight(meixner_half, Fraction(1, 2))


def test_squared_norms(hermite, kravchuk_half_4) -> None:
    assert squared_norm(hermite, 2) == pytest.approx(8 * math.sqrt(math.pi))
    assert squared_norm(kravchuk_half_4, 1) == 1
    spec = make_family("meixner", {"gamma": 3, "mu": Fraction(1, 4)})
    assert squared_norm(spec, 2) == Fraction(2 * 3 * 4) * 16 * Fraction(4, 3) ** 3
    with pytest.raises(IndexRangeError):
        squared_norm(kravchuk_half_4, 5)


def test_pearson_relation_holds_exactly_on_discrete_support(kravchuk_half_4) -> None:
    meixner = make_family("meixner", {"gamma": 3, "mu": Fraction(1, 4)})
    for x in range(5):
        assert pearson_residual(kravchuk_half_4, x) == 0
    for x in range(20):
        assert pearson_residual(meixner, x) == 0


@pytest.mark.parametrize("s", [0.3, 1.0, 2.5, 7.0])
def test_pearson_relation_continuous(s: float) -> None:
    assert pearson_residual(make_family("laguerre", {"alpha": 2}), s) == pytest.approx(0.0, abs=1e-12)
    assert pearson_residual(make_family("hermite"), s - 3) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "name, params",
    [
        ("kravchuk", {"p": Fraction(3, 2), "N": 4}),
        ("kravchuk", {"p": Fraction(1, 2), "N": 0}),
        ("kravchuk", {"p": Fraction(1, 2), "N": Fraction(5, 2)}),
        ("meixner", {"gamma": 0, "mu": Fraction(1, 2)}),
        ("meixner", {"gamma": 1, "mu": 1}),
        ("laguerre", {"alpha": -1}),
        ("laguerre", {}),
        ("chebyshev", {}),
    ],
)
def test_invalid_parameters_rejected(name: str, params: dict) -> None:
    with pytest.raises(InvalidParameterError):
        make_family(name, params)


def test_exactness_follows_parameters() -> None:
    assert make_family("laguerre", {"alpha": "1/2"}).exact is True
    assert make_family("laguerre", {"alpha": 0.5}).exact is False
    assert parse_number("0.1") == Fraction(1, 10)
    with pytest.raises(InvalidParameterError):
        parse_number("one half")


def test_descriptor_fields(meixner_half) -> None:
    descriptor = family_descriptor(meixner_half)

    assert descriptor.params == {"gamma": "1/1", "mu": "1/2"}
    assert descriptor.sigma == ["0/1", "1/1", "0/1"]


@pytest.mark.parametrize(
    "name, params",
    [
        ("kravchuk", {"p": Fraction(1, 3), "N": 7}),
        ("meixner", {"gamma": Fraction(5, 2), "mu": Fraction(1, 4)}),
    ],
)
def test_tau_n_step_matches_eigenvalue(name: str, params: dict) -> None:
    spec = make_family(name, params)

    for n in range(8):
        # tau_n(x+1) - tau_n(x) = -lambda_{2n+1} / (2n+1)
        for x in range(6):
            assert tau_n(spec, n, x + 1) - tau_n(spec, n, x) == -lambda_over_n(spec, 2 * n + 1)
        assert lambda_n(spec, 2 * n + 1) == (2 * n + 1) * lambda_over_n(spec, 2 * n + 1)


def test_pochhammer_exact_and_float() -> None:
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(Fraction(3), 0) == 1
    assert pochhammer(0.5, 3) == pytest.approx(1.875)
    assert isinstance(pochhammer(2.5, 4), float)
