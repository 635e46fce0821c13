"""
Resource limits - loaded from limits.yaml, overridable from the environment.

Usage:
    from config.settings import get_limits

    limits = get_limits()
    budget = limits.groebner_budget
"""

import os
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv

LIMITS_FILE = Path(__file__).resolve().parent / "limits.yaml"
EXPERIMENTS_FILE = Path(__file__).resolve().parent / "experiments.yaml"

# Environment overrides (integer limits only)
ENV_OVERRIDES = {
    'groebner_budget': 'BERTINI_BUDGET',
    'field_bound': 'BERTINI_FIELD_BOUND',
    'form_bound': 'BERTINI_FORM_BOUND',
    'point_bound': 'BERTINI_POINT_BOUND',
}


@dataclass(frozen=True)
class Limits:
    field_bound: int
    form_bound: int
    point_bound: int
    groebner_budget: int
    truncation_degree: int
    undecided_alarm: float
    confidence_z: float

    def with_overrides(self, **changes) -> "Limits":
        """Copy with the non-None keyword values replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw.strip())
    except ValueError:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


def load_limits(path: Path = LIMITS_FILE) -> Limits:
    """
    Read limits.yaml and apply environment overrides.

    Args:
        path: YAML file with one key per Limits field

    Returns:
        Limits
    """
    load_dotenv()
    with open(path) as f:
        raw = yaml.safe_load(f) or {}

    for field_name, env_name in ENV_OVERRIDES.items():
        value = _env_int(env_name)
        if value is not None:
            raw[field_name] = value

    return Limits(
        field_bound=int(raw['field_bound']),
        form_bound=int(raw['form_bound']),
        point_bound=int(raw['point_bound']),
        groebner_budget=int(raw['groebner_budget']),
        truncation_degree=int(raw['truncation_degree']),
        undecided_alarm=float(raw['undecided_alarm']),
        confidence_z=float(raw['confidence_z']),
    )


@lru_cache(maxsize=1)
def get_limits() -> Limits:
    """Process-wide limits (read once)."""
    return load_limits()


def load_presets(path: Path = EXPERIMENTS_FILE) -> dict:
    """Load experiment presets from YAML file."""
    with open(path) as f:
        config = yaml.safe_load(f) or {}
    return config.get('presets', config)
