"""
Configuration for tolerances and run settings
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass


def _env_float(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be a number, got {raw!r}") from exc


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class ToleranceConfig:
    """Contract tolerances used by every check."""

    residual: float = 1e-10
    duality: float = 1e-12
    unitarity: float = 1e-10
    commutator: float = 1e-12
    ladder: float = 1e-9
    quadrature: float = 1e-8
    drift: float = 1e-12
    meixner_tail: float = 1e-30

    @classmethod
    def from_env(cls) -> "ToleranceConfig":
        return cls(
            residual=_env_float("ORTHOPOLY_RESIDUAL_TOL", "1e-10"),
            duality=_env_float("ORTHOPOLY_DUALITY_TOL", "1e-12"),
            unitarity=_env_float("ORTHOPOLY_UNITARITY_TOL", "1e-10"),
            commutator=_env_float("ORTHOPOLY_COMMUTATOR_TOL", "1e-12"),
            ladder=_env_float("ORTHOPOLY_LADDER_TOL", "1e-9"),
            quadrature=_env_float("ORTHOPOLY_QUADRATURE_TOL", "1e-8"),
            drift=_env_float("ORTHOPOLY_DRIFT_TOL", "1e-12"),
            meixner_tail=_env_float("ORTHOPOLY_MEIXNER_TAIL", "1e-30"),
        )

    @classmethod
    def defaults(cls) -> "ToleranceConfig":
        return cls()

    def with_override(self, value: float) -> "ToleranceConfig":
        """Replace every check tolerance (the tail threshold is kept)."""
        if value <= 0:
            raise ValueError("tolerance override must be positive")
        changes = {f.name: value for f in fields(self) if f.name != "meixner_tail"}
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RunConfig:
    float_digits: int = 17
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "RunConfig":
        return cls(
            float_digits=_env_int("ORTHOPOLY_FLOAT_DIGITS", "17"),
            log_level=os.getenv("ORTHOPOLY_LOG_LEVEL", "INFO").upper(),
        )

    @property
    def float_format(self) -> str:
        return f".{self.float_digits}g"
