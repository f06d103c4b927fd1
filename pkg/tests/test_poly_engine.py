from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from family_catalog import IndexRangeError, make_family, squared_norm
from poly_engine import (
    build_by_raising,
    build_by_recurrence,
    equation_residual,
    evaluate,
    evaluate_by_recurrence,
    export_poly_seq,
    gauss_rule,
    ground_polynomial,
    lower,
    meixner_relative_moments,
    orthogonality_matrix,
    poly_table_rows,
)
from rational_poly import RationalPoly

FAMILIES = [
    ("hermite", {}),
    ("laguerre", {"alpha": Fraction(1, 2)}),
    ("laguerre", {"alpha": 0}),
    ("kravchuk", {"p": Fraction(1, 3), "N": 6}),
    ("meixner", {"gamma": 2, "mu": Fraction(1, 3)}),
    ("meixner", {"gamma": Fraction(5, 2), "mu": Fraction(1, 4)}),
]


def test_hermite_recurrence_gives_physicists_polynomials(hermite) -> None:
    seq = build_by_recurrence(hermite, 3)

    assert seq[0] == RationalPoly([1])
    assert seq[1] == RationalPoly([0, 2])
    assert seq[2] == RationalPoly([-2, 0, 4])
    assert seq[3] == RationalPoly([0, -12, 0, 8])


def test_kravchuk_first_polynomial(kravchuk_half_4) -> None:
    seq = build_by_recurrence(kravchuk_half_4, 4)

    assert seq[1] == RationalPoly([-2, 1])
    assert all(seq[n].degree == n for n in range(5))


def test_raising_route_first_steps() -> None:
    assert build_by_raising(make_family("hermite"), 1)[1] == RationalPoly([0, 2])
    gamma, mu = Fraction(3), Fraction(1, 4)
    meixner = build_by_raising(make_family("meixner", {"gamma": gamma, "mu": mu}), 1)
    assert meixner[1] == RationalPoly([gamma, 1 - 1 / mu])
    alpha = Fraction(1, 2)
    laguerre = build_by_raising(make_family("laguerre", {"alpha": alpha}), 1)
    assert laguerre[1] == RationalPoly([1 + alpha, -1])


@pytest.mark.parametrize("name, params", FAMILIES)
def test_recurrence_and_raising_routes_agree(name: str, params: dict) -> None:
    spec = make_family(name, params)
    n_max = 6

    assert build_by_recurrence(spec, n_max).polys == build_by_raising(spec, n_max).polys


@pytest.mark.parametrize("name, params", FAMILIES)
def test_lowering_inverts_raising(name: str, params: dict) -> None:
    spec = make_family(name, params)
    seq = build_by_raising(spec, 6)

    for n in range(1, 7):
        assert lower(spec, seq, n) == seq[n - 1]


def test_hermite_lowering_is_derivative_over_2n(hermite) -> None:
    seq = build_by_recurrence(hermite, 5)

    for n in range(1, 6):
        assert lower(hermite, seq, n) == seq[n].derivative() / (2 * n)


def test_laguerre_displayed_ladder_forms() -> None:
    # s L_n' = (n+1) L_{n+1} - (n+alpha+1-s) L_n and s L_n' = n L_n - (n+alpha) L_{n-1}
    alpha = Fraction(2, 3)
    spec = make_family("laguerre", {"alpha": alpha})
    seq = build_by_recurrence(spec, 6)
    s = RationalPoly.x()
    for n in range(1, 6):
        lhs = s * seq[n].derivative()
        assert lhs == seq[n + 1] * (n + 1) - seq[n] * RationalPoly([n + alpha + 1, -1])
        assert lhs == seq[n] * n - seq[n - 1] * (n + alpha)


def test_kravchuk_forward_lowering_returns_ground(kravchuk_half_4) -> None:
    seq = build_by_recurrence(kravchuk_half_4, 4)

    # q(N-n+1) k_{n-1} = (x+n-N) k_n + (N-x) k_n(x+1) at n = 1
    x = RationalPoly.x()
    rhs = (x + 1 - 4) * seq[1] + (4 - x) * seq[1].shift(1)
    assert rhs == RationalPoly([2])
    assert lower(kravchuk_half_4, seq, 1, form="forward") == RationalPoly([1])


@pytest.mark.parametrize("name, params", [f for f in FAMILIES if f[0] in ("kravchuk", "meixner")])
def test_forward_lowering_relation_holds(name: str, params: dict) -> None:
    spec = make_family(name, params)
    seq = build_by_recurrence(spec, 6)

    for n in range(1, 7):
        assert lower(spec, seq, n, form="forward") == seq[n - 1]


def test_forward_lowering_rejects_continuous(hermite) -> None:
    seq = build_by_recurrence(hermite, 2)
    with pytest.raises(ValueError):
        lower(hermite, seq, 2, form="forward")


def test_ground_polynomial_is_one() -> None:
    for name, params in FAMILIES:
        assert ground_polynomial(make_family(name, params)) == RationalPoly([1])


def test_equation_residual(hermite, kravchuk_half_4) -> None:
    seq = build_by_recurrence(hermite, 2)
    assert equation_residual(hermite, seq, 2, 3) == 0
    assert equation_residual(kravchuk_half_4, build_by_recurrence(kravchuk_half_4, 1), 1, 2) == 0

    corrupted = build_by_recurrence(hermite, 2)
    corrupted.polys[2] = corrupted.polys[2] + 1
    assert equation_residual(hermite, corrupted, 2, 3) != 0


def test_index_range_errors(kravchuk_half_4) -> None:
    with pytest.raises(IndexRangeError):
        build_by_recurrence(kravchuk_half_4, 5)
    with pytest.raises(IndexRangeError):
        build_by_recurrence(kravchuk_half_4, -1)


def test_exact_evaluation_at_float_points(hermite) -> None:
    seq = build_by_recurrence(hermite, 4)

    assert evaluate(seq, 2, 0.5) == Fraction(-1)
    assert isinstance(evaluate(seq, 3, 0.1), Fraction)


def test_float_engine_matches_exact_polynomials() -> None:
    spec = make_family("meixner", {"gamma": 3, "mu": Fraction(1, 4)})
    seq = build_by_recurrence(spec, 8)
    xs = np.arange(0, 15, dtype=float)
    values = evaluate_by_recurrence(spec, 8, xs)

    for n in range(9):
        exact = np.array([float(seq[n](int(x))) for x in xs])
        assert np.allclose(values[n], exact, rtol=1e-12, atol=1e-12 * np.max(np.abs(exact)))


def test_kravchuk_gram_is_exactly_diagonal(kravchuk_half_4) -> None:
    gram = orthogonality_matrix(kravchuk_half_4, 4)

    assert gram.exact
    for n in range(5):
        for m in range(5):
            expected = squared_norm(kravchuk_half_4, n) if n == m else 0
            assert gram.entries[n][m] == expected


def test_meixner_gram_exact_from_moments() -> None:
    spec = make_family("meixner", {"gamma": 2, "mu": Fraction(1, 2)})
    gram = orthogonality_matrix(spec, 5)

    assert gram.exact and gram.method == "factorial-moments"
    for n in range(6):
        for m in range(6):
            assert gram.entries[n][m] == (squared_norm(spec, n) if n == m else 0)


def test_meixner_float_gram_truncates_tail() -> None:
    spec = make_family("meixner", {"gamma": 2.0, "mu": 0.5})
    gram = orthogonality_matrix(spec, 4)

    assert not gram.exact and gram.tail_index is not None
    matrix = gram.as_array()
    diag = np.array([squared_norm(spec, n) for n in range(5)])
    assert np.allclose(np.diag(matrix), diag, rtol=1e-10)
    assert np.max(np.abs(matrix - np.diag(np.diag(matrix))) / np.sqrt(np.outer(diag, diag))) < 1e-10


@pytest.mark.parametrize("name, params", [("hermite", {}), ("laguerre", {"alpha": Fraction(1, 2)})])
def test_continuous_gram_by_quadrature(name: str, params: dict) -> None:
    spec = make_family(name, params)
    matrix = orthogonality_matrix(spec, 6).as_array()
    diag = np.array([float(squared_norm(spec, n)) for n in range(7)])

    assert np.allclose(np.diag(matrix), diag, rtol=1e-8)
    off = matrix - np.diag(np.diag(matrix))
    assert np.max(np.abs(off) / np.sqrt(np.outer(diag, diag))) < 1e-8
    if name == "hermite":
        assert matrix[0, 0] == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_gauss_rule_integrates_polynomials_exactly(hermite) -> None:
    nodes, weights = gauss_rule(hermite, 5)

    assert weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert np.sum(weights * nodes**2) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)
    assert np.sum(weights * nodes**8) == pytest.approx(105 * math.sqrt(math.pi) / 16, rel=1e-11)


def test_gauss_rule_rejects_too_many_nodes(kravchuk_half_4) -> None:
    with pytest.raises(IndexRangeError):
        gauss_rule(kravchuk_half_4, 6)


def test_jacobi_matrix_needs_positive_products() -> None:
    from poly_engine import jacobi_matrix

    diagonal, off = jacobi_matrix(make_family("laguerre", {"alpha": 0}), 4)
    assert list(diagonal) == [1.0, 3.0, 5.0, 7.0]
    assert off == pytest.approx([1.0, 2.0, 3.0])


def test_exports(kravchuk_half_4) -> None:
    seq = build_by_recurrence(kravchuk_half_4, 2)
    export = export_poly_seq(seq)

    assert export.n_max == 2
    assert export.coeffs[1] == ["-2/1", "1/1"]
    assert export.family.name == "kravchuk"
    rows = poly_table_rows(seq, [0, 1])
    assert rows[:2] == [("kravchuk", 0, 0, 1.0), ("kravchuk", 0, 1, 1.0)]
    assert rows[2] == ("kravchuk", 1, 0, -2.0)


def test_meixner_moments_from_stirling_numbers() -> None:
    gamma, mu = Fraction(3), Fraction(1, 4)
    ratio = mu / (1 - mu)
    moments = meixner_relative_moments(make_family("meixner", {"gamma": gamma, "mu": mu}), 3)

    assert moments[0] == 1
    assert moments[1] == gamma * ratio
    assert moments[2] == gamma * ratio + gamma * (gamma + 1) * ratio**2
    # S(3,1)=1, S(3,2)=3, S(3,3)=1
    assert moments[3] == gamma * ratio + 3 * gamma * (gamma + 1) * ratio**2 + gamma * (gamma + 1) * (gamma + 2) * ratio**3
