from __future__ import annotations

from fractions import Fraction

import pytest

from exact_oracle import certify_family, float_drift, perturbed_recurrence
from family_catalog import InvalidParameterError, make_family

DISCRETE_CHECKS = [
    "D2",
    "route_equivalence",
    "lowering_inversion",
    "defining_equation",
    "forward_lowering",
    "gram_diagonal",
    "squared_norm",
]


def test_kravchuk_certificate() -> None:
    report = certify_family(make_family("kravchuk", {"p": Fraction(1, 2), "N": 8}), 8)

    assert report.passed
    assert report.exact
    assert [check.name for check in report.checks] == DISCRETE_CHECKS
    assert all(check.status == "pass" for check in report.checks)
    assert report.params == {"p": "1/2", "N": "8/1"}


@pytest.mark.parametrize("gamma", [1, 2, 3])
@pytest.mark.parametrize("mu", [Fraction(1, 4), Fraction(1, 2)])
def test_meixner_certificate(gamma: int, mu: Fraction) -> None:
    report = certify_family(make_family("meixner", {"gamma": gamma, "mu": mu}), 8)

    assert report.passed
    assert report.first_failure() is None


def test_hermite_certificate_uses_quadrature_for_gram() -> None:
    report = certify_family(make_family("hermite"), 12)
    checks = {check.name: check for check in report.checks}

    assert report.passed
    assert checks["C2"].status == "pass"
    assert checks["defining_equation"].status == "pass"
    assert checks["gram_diagonal"].status == "float"
    assert checks["gram_diagonal"].mode == "float"
    assert "forward_lowering" not in checks


def test_laguerre_certificate() -> None:
    report = certify_family(make_family("laguerre", {"alpha": Fraction(1, 2)}), 8)

    assert report.passed


def test_fault_injection_names_first_failure() -> None:
    spec = make_family("kravchuk", {"p": Fraction(1, 2), "N": 8})
    report = certify_family(spec, 6, recurrence_override=perturbed_recurrence(spec, 1, Fraction(1, 3)))

    assert not report.passed
    failure = report.first_failure()
    assert failure.name == "D2"
    assert failure.first_failure == "kravchuk n=1 D2"


def test_perturbed_recurrence_only_touches_one_index(kravchuk_half_4) -> None:
    rec = kravchuk_half_4.recurrence
    perturbed = perturbed_recurrence(kravchuk_half_4, 2, Fraction(1, 5))

    assert perturbed.gamma_n(2) == rec.gamma_n(2) + Fraction(1, 5)
    assert perturbed.gamma_n(1) == rec.gamma_n(1)
    assert perturbed.alpha_n(3) == rec.alpha_n(3)


def test_float_mode_certificate() -> None:
    report = certify_family(make_family("meixner", {"gamma": 1, "mu": 0.5}), 4)

    assert not report.exact
    assert report.passed
    assert all(check.mode == "float" for check in report.checks)


def test_kravchuk_float_drift() -> None:
    report = float_drift(make_family("kravchuk", {"p": Fraction(1, 2), "N": 10}), 10, range(11))

    assert report.passed
    assert report.max_relative_drift < 1e-13
    assert report.points == 11


def test_meixner_float_drift() -> None:
    report = float_drift(make_family("meixner", {"gamma": 3, "mu": Fraction(1, 4)}), 10, range(41))

    assert report.max_relative_drift < 1e-12


def test_ground_state_has_no_drift(meixner_half) -> None:
    report = float_drift(meixner_half, 0, range(10))

    assert report.max_relative_drift == 0.0
    assert report.worst_index is None


def test_float_drift_needs_rational_parameters() -> None:
    with pytest.raises(InvalidParameterError):
        float_drift(make_family("kravchuk", {"p": 0.3, "N": 5}), 3, range(6))
