"""Tool configuration: thresholds, bootstrap parameters, tier boundaries.

Precedence is flags > config file > defaults, applied once in the CLI. Every
report echoes the exact configuration used, so reports are self-describing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .difficulty import TierBoundaries
from .errors import ConfigError


@dataclass(frozen=True)
class ToolConfig:
    min_abs_kappa: float = 0.8
    deviation_delta: float = 0.1
    min_units_per_pair: int = 10
    bootstrap_samples: int = 1000
    confidence: float = 0.95
    seed: int = 0
    tier_boundaries: TierBoundaries = TierBoundaries()

    def __post_init__(self):
        for name in ("min_abs_kappa", "deviation_delta", "confidence"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.min_units_per_pair < 1:
            raise ConfigError("min_units_per_pair must be >= 1")
        if self.bootstrap_samples < 100:
            raise ConfigError("bootstrap_samples must be >= 100")

    def echo(self) -> dict:
        """The exact settings embedded in every report."""
        return {
            "min_abs_kappa": self.min_abs_kappa,
            "deviation_delta": self.deviation_delta,
            "min_units_per_pair": self.min_units_per_pair,
            "bootstrap_samples": self.bootstrap_samples,
            "confidence": self.confidence,
            "seed": self.seed,
            "tier_boundaries": {
                "easy": self.tier_boundaries.easy,
                "moderate": self.tier_boundaries.moderate,
                "hard": self.tier_boundaries.hard,
            },
        }


_SCALAR_KEYS = (
    "min_abs_kappa",
    "deviation_delta",
    "min_units_per_pair",
    "bootstrap_samples",
    "confidence",
    "seed",
)


def load_config(path: str) -> ToolConfig:
    """Read a JSON config file; unknown keys are rejected."""
    with open(path, "rb") as handle:
        try:
            obj = json.loads(handle.read().decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = set(obj) - set(_SCALAR_KEYS) - {"tier_boundaries"}
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    kwargs = {k: obj[k] for k in _SCALAR_KEYS if k in obj}
    if "tier_boundaries" in obj:
        tb = obj["tier_boundaries"]
        if not isinstance(tb, dict) or set(tb) - {"easy", "moderate", "hard"}:
            raise ConfigError(f"{path}: bad tier_boundaries")
        try:
            kwargs["tier_boundaries"] = TierBoundaries(**tb)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return ToolConfig(**kwargs)


def apply_overrides(config: ToolConfig, **overrides) -> ToolConfig:
    """Apply non-None scalar overrides (CLI flags) on top of a config."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **updates) if updates else config
