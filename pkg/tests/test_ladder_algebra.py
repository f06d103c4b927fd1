from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from family_catalog import InvalidParameterError, make_family
from ladder_algebra import (
    LadderFamily,
    Operator,
    build_by_ladder,
    closure_report,
    commutator,
    export_matrix,
    ladder_matrix,
)
from normalized_functions import psi


def test_hermite_raise_entries() -> None:
    matrix = ladder_matrix("hermite", "raise", 3)

    assert np.allclose(np.diag(matrix.entries, k=-1), [1.0, math.sqrt(2)])
    assert np.count_nonzero(matrix.entries) == 2


def test_meixner_raise_entries() -> None:
    matrix = ladder_matrix("meixner", Operator.RAISE, 3, {"gamma": 1, "mu": Fraction(1, 2)})

    assert np.allclose(np.diag(matrix.entries, k=-1), [math.sqrt(0.5), math.sqrt(2)])


def test_wigner_spin_half() -> None:
    raise_m = ladder_matrix("wigner", "raise", 2)
    diag = ladder_matrix("wigner", "diagonal", 2)

    # basis ordered n = 0, 1, i.e. m = +1/2, -1/2: A+ maps +1/2 -> -1/2 and annihilates the lowest weight
    assert raise_m.entries[1, 0] == pytest.approx(1.0)
    assert np.array_equal(raise_m.entries @ np.array([0.0, 1.0]), [0.0, 0.0])
    assert np.allclose(raise_m.entries @ np.array([1.0, 0.0]), [0.0, 1.0])
    assert np.allclose(np.diag(diag.entries), [0.5, -0.5])


@pytest.mark.parametrize("family, params", [("hermite", {}), ("laguerre", {"alpha": 1}), ("meixner", {"gamma": 2, "mu": 0.3}), ("wigner", {})])
def test_lower_is_transpose_of_raise(family: str, params: dict) -> None:
    raise_m = ladder_matrix(family, "raise", 7, params)
    lower_m = ladder_matrix(family, "lower", 7, params)

    assert np.array_equal(lower_m.entries, raise_m.entries.T)
    assert not raise_m.entries.flags.writeable


def test_commutator_dimension_mismatch() -> None:
    with pytest.raises(InvalidParameterError):
        commutator(ladder_matrix("hermite", "raise", 3), ladder_matrix("hermite", "lower", 4))


def test_ladder_matrix_errors() -> None:
    with pytest.raises(InvalidParameterError):
        ladder_matrix("hermite", "raise", 1)
    with pytest.raises(InvalidParameterError):
        ladder_matrix("charlier", "raise", 4)
    with pytest.raises(InvalidParameterError):
        ladder_matrix("hermite", "sideways", 4)
    with pytest.raises(InvalidParameterError):
        ladder_matrix("meixner", "raise", 4, {"gamma": 1, "mu": 2})


@pytest.mark.parametrize("two_j", range(1, 13))
def test_wigner_so3_exact_everywhere(two_j: int) -> None:
    dim = two_j + 1
    plus = ladder_matrix("wigner", "raise", dim)
    minus = ladder_matrix("wigner", "lower", dim)
    zero = ladder_matrix("wigner", "diagonal", dim)

    assert np.max(np.abs(commutator(plus, minus) + 2 * zero.entries)) < 1e-12
    assert np.max(np.abs(commutator(plus, zero) - plus.entries / two_j)) < 1e-12
    assert np.max(np.abs(commutator(minus, zero) + minus.entries / two_j)) < 1e-12


def test_hermite_identity_on_interior() -> None:
    a_plus = ladder_matrix("hermite", "raise", 8)
    a = ladder_matrix("hermite", "lower", 8)
    c = commutator(a, a_plus)

    assert np.allclose(c[:-1, :-1], np.eye(7), atol=1e-12)
    assert c[-1, -1] == pytest.approx(-7.0)


def test_meixner_interior_diagonal() -> None:
    params = {"gamma": 1, "mu": Fraction(1, 2)}
    c = commutator(ladder_matrix("meixner", "raise", 8, params), ladder_matrix("meixner", "lower", 8, params))

    for n in range(7):
        assert abs(c[n, n]) == pytest.approx(0.5 * (2 * n + 1), abs=1e-12)


def test_closure_report_measures_constants() -> None:
    wigner = closure_report("wigner", 5)
    constants = {r.relation: r for r in wigner.relations}
    assert wigner.closes
    assert constants["[A+,A-] = 2 A0"].measured_constant == pytest.approx(-2.0)
    assert not constants["[A+,A-] = 2 A0"].matches_printed
    assert constants["[A+,A0] = +A+"].measured_constant == pytest.approx(0.25)
    assert constants["[A-,A0] = -A-"].measured_constant == pytest.approx(-0.25)
    assert not constants["[A+,A0] = +A+"].matches_printed

    mu = 0.3
    meixner = closure_report("meixner", 12, {"gamma": 2, "mu": mu})
    assert meixner.closes and meixner.interior == 11
    measured = [r.measured_constant for r in meixner.relations]
    assert measured == pytest.approx([-1.0, -2 * mu, 2 * mu], abs=1e-12)

    laguerre = closure_report("laguerre", 12, {"alpha": 0.5})
    assert laguerre.closes
    assert [r.measured_constant for r in laguerre.relations] == pytest.approx([-1.0, -2.0, 2.0], abs=1e-12)

    hermite = closure_report(LadderFamily.HERMITE, 12)
    assert hermite.closes
    assert all(r.matches_printed for r in hermite.relations)


def test_closure_mismatch_is_logged(caplog) -> None:
    with caplog.at_level("WARNING"):
        closure_report("meixner", 6, {"gamma": 1, "mu": 0.5})
    assert "differs from printed" in caplog.text


def test_export_matrix_triplets() -> None:
    export = export_matrix(ladder_matrix("hermite", "raise", 3))

    assert export.family == "hermite" and export.operator == "raise" and export.dim == 3
    assert export.triplets == [[1, 0, 1.0], [2, 1, pytest.approx(math.sqrt(2))]]


def test_hermite_ladder_route_matches_direct() -> None:
    spec = make_family("hermite")
    grid = [float(s) for s in np.arange(-6.0, 6.01, 0.5)]

    for n in range(11):
        state = build_by_ladder(spec, n, grid)
        assert state.norm_checked
        for s in grid:
            assert state.values[s] == pytest.approx(psi(spec, n, s), abs=1e-10)


@pytest.mark.parametrize("alpha", [0, 1])
def test_laguerre_ladder_route_matches_direct(alpha: int) -> None:
    spec = make_family("laguerre", {"alpha": alpha})
    grid = [float(s) for s in np.arange(0.5, 20.01, 0.5)]

    for n in range(11):
        state = build_by_ladder(spec, n, grid)
        assert state.norm_checked
        assert max(abs(state.values[s] - psi(spec, n, s)) for s in grid) < 1e-9


def test_meixner_ladder_route_matches_direct(meixner_half) -> None:
    points = list(range(30))

    zero = build_by_ladder(meixner_half, 0, points)
    assert all(zero.values[x] == pytest.approx(psi(meixner_half, 0, x), abs=1e-15) for x in points)
    for n in range(11):
        state = build_by_ladder(meixner_half, n, points)
        assert state.norm_checked
        assert max(abs(state.values[x] - psi(meixner_half, n, x)) for x in points) < 1e-9


def test_kravchuk_ladder_route_matches_direct() -> None:
    spec = make_family("kravchuk", {"p": Fraction(1, 3), "N": 8})
    for n in range(9):
        state = build_by_ladder(spec, n, range(9))
        assert max(abs(state.values[x] - psi(spec, n, x)) for x in range(9)) < 1e-10
