"""Run configuration: defaults, then ``SYMINDEX_*`` environment overrides, then flags."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields, replace

from .core import Tolerances
from .errors import ValidationError

ENV_PREFIX = "SYMINDEX_"
FORMATS = ("json", "csv", "table")


@dataclass(frozen=True)
class RunConfig:
    tolerances: Tolerances = field(default_factory=Tolerances)
    epsilon: float = 1e-3
    n_max: int = 10**7
    want: int = 3
    delta: float = 0.1
    m_bar_override: int | None = None
    m_bar_range: int = 5
    ell0: int = 5
    eta: float = 0.5
    seed: int = 0
    format: str = "json"
    output: str | None = None

    def __post_init__(self):
        if not 0 < self.epsilon < 0.5:
            raise ValidationError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise ValidationError(f"delta must lie in (0, 1), got {self.delta}")
        for name in ("n_max", "want", "m_bar_range", "ell0"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")
        if self.m_bar_override is not None and self.m_bar_override < 1:
            raise ValidationError("m_bar_override must be positive")
        if self.eta <= 0:
            raise ValidationError("eta must be positive")
        if self.format not in FORMATS:
            raise ValidationError(f"format must be one of {FORMATS}")

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("output")
        return out


def _coerce(kind, raw: str):
    if kind in (int, "int"):
        return int(raw)
    if kind in (float, "float"):
        return float(raw)
    return raw


def tolerances_from_env(env=None, base: Tolerances | None = None) -> Tolerances:
    env = os.environ if env is None else env
    base = base or Tolerances()
    updates = {}
    for f in fields(Tolerances):
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            try:
                updates[f.name] = _coerce(f.type, env[key])
            except ValueError:
                raise ValidationError(f"{key}={env[key]!r} is not a valid {f.type}") from None
    return replace(base, **updates)


def config_from_env(env=None) -> dict:
    """Non-tolerance settings found in the environment, as keyword arguments."""
    env = os.environ if env is None else env
    out = {}
    for f in fields(RunConfig):
        if f.name in ("tolerances", "output"):
            continue
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            kind = {"m_bar_override": "int"}.get(f.name, f.type)
            try:
                out[f.name] = _coerce(kind, env[key])
            except ValueError:
                raise ValidationError(f"{key}={env[key]!r} is not valid") from None
    return out
