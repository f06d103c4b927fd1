from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from family_catalog import make_family  # noqa: E402


@pytest.fixture
def kravchuk_half_4():
    return make_family("kravchuk", {"p": Fraction(1, 2), "N": 4})


@pytest.fixture
def meixner_half():
    return make_family("meixner", {"gamma": 1, "mu": Fraction(1, 2)})


@pytest.fixture
def hermite():
    return make_family("hermite")


@pytest.fixture(autouse=True)
def _clean_tolerance_env(monkeypatch):
    for name in (
        "ORTHOPOLY_RESIDUAL_TOL",
        "ORTHOPOLY_DUALITY_TOL",
        "ORTHOPOLY_UNITARITY_TOL",
        "ORTHOPOLY_COMMUTATOR_TOL",
        "ORTHOPOLY_LADDER_TOL",
        "ORTHOPOLY_QUADRATURE_TOL",
        "ORTHOPOLY_DRIFT_TOL",
        "ORTHOPOLY_MEIXNER_TAIL",
        "ORTHOPOLY_FLOAT_DIGITS",
        "ORTHOPOLY_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
