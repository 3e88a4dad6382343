"""Settings and experiment configuration."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml
from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .channel.adversary import AdversaryStrategy
from .channel.strategies import STRATEGIES, build_strategy
from .codes.codec import AwtpParams, awtp_derive_params
from .errors import ConfigError, ParamError

ENV_PREFIX = "AWTP_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _coerce(value: Any, like: Any) -> Any:
    if isinstance(like, bool):
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    if isinstance(like, int):
        return int(value)
    return str(value)


@dataclass
class Settings:
    """Runtime settings shared by the CLI and the experiment harness."""

    # Logging
    log_level: str = "WARNING"

    # Execution
    workers: int = 1
    default_seed: int = 0

    # Output
    results_dir: str = "./results"

    # Limits
    enumeration_cap: int = 1_000_000
    strict_rate: bool = False

    @classmethod
    def load(cls, env_file: Path | str = ".env") -> "Settings":
        """Defaults, then the .env file, then AWTP_* environment variables."""
        settings = cls()
        path = Path(env_file)
        if path.exists():
            settings.update_from_dict(_strip_prefix(dotenv_values(path)))
        settings.update_from_dict(_strip_prefix(os.environ))
        return settings

    def update_from_dict(self, updates: Dict[str, Any]) -> None:
        """Apply overrides; unknown keys and None values are ignored."""
        defaults = {f.name: f.default for f in fields(self)}
        for key, value in updates.items():
            if key in defaults and value is not None:
                try:
                    setattr(self, key, _coerce(value, defaults[key]))
                except ValueError as exc:
                    raise ConfigError(f"setting {key}={value!r} has the wrong type: {exc}") from exc

    def validate(self) -> list[str]:
        """Return a list of human-readable issues."""
        issues = []

        if self.log_level.upper() not in LOG_LEVELS:
            issues.append(f"Log level must be one of {', '.join(LOG_LEVELS)}")

        if self.workers < 1:
            issues.append("Workers must be at least 1")

        if not 0 <= self.default_seed < 2**64:
            issues.append("Default seed must fit in 64 bits")

        if self.enumeration_cap < 1:
            issues.append("Enumeration cap must be at least 1")

        return issues

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _strip_prefix(values) -> Dict[str, Any]:
    return {key[len(ENV_PREFIX) :].lower(): value for key, value in values.items() if key.startswith(ENV_PREFIX)}


class ParamsSpec(BaseModel):
    """Parameter set as decimal strings, e.g. {"q": "241", "R": "1/30", ...}."""

    q: str
    u: str
    v: str
    N: str
    R: str
    rho_r: str
    rho_w: str
    mode: Literal["permissive", "strict"] = "permissive"

    @field_validator("q", "u", "v", "N", "R", "rho_r", "rho_w", mode="before")
    @classmethod
    def _decimal_string(cls, value: Any) -> str:
        if isinstance(value, bool) or not isinstance(value, (str, int, Fraction)):
            raise ValueError(f"expected a decimal string, got {value!r}")
        return str(value).strip()

    def resolve(self, strict: bool = False) -> AwtpParams:
        try:
            integers = [int(getattr(self, name)) for name in ("q", "u", "v", "N")]
            rationals = [Fraction(getattr(self, name)) for name in ("R", "rho_r", "rho_w")]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParamError(f"malformed parameter value: {exc}") from exc
        mode = "strict" if strict else self.mode
        return awtp_derive_params(*integers, *rationals, mode=mode)

    @classmethod
    def from_params(cls, P: AwtpParams) -> "ParamsSpec":
        return cls(**P.as_dict())


class StrategySpec(BaseModel):
    name: str = "noop"
    args: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("name")
    @classmethod
    def _known(cls, value: str) -> str:
        if value not in STRATEGIES:
            raise ValueError(f"unknown strategy {value!r}; choose from {sorted(STRATEGIES)}")
        return value

    def build(self) -> AdversaryStrategy:
        return build_strategy(self.name, **self.args)


class MicroFrsSection(BaseModel):
    """A stand-alone FRS code whose first ``s_length`` coefficients are fixed and the rest uniform."""

    q: int = 13
    u: int = 3
    N: int = 4
    reads: int = 1
    s_length: int = 3


class SecrecySection(BaseModel):
    messages: Optional[list[list[int]]] = None
    s_vectors: Optional[list[list[int]]] = None
    read_set: Optional[list[int]] = None
    micro: MicroFrsSection = Field(default_factory=MicroFrsSection)


class AmdSection(BaseModel):
    q: int = 5
    m: int = 2
    ell: int = 1


class SesSection(BaseModel):
    q: int = 11
    v: int = 2
    blocks: int = 1
    max_dim: int = 2


class BoundsSection(BaseModel):
    rho_r: list[str] = Field(default_factory=lambda: ["0", "1/8", "1/4", "1/2"])
    rho_w: list[str] = Field(default_factory=lambda: ["0", "1/8", "1/4", "1/2"])
    eps: list[str] = Field(default_factory=lambda: ["0", "1/100"])
    alphabet_bits: str = "1"
    xi1: list[str] = Field(default_factory=lambda: ["1/100", "1/200"])
    schedule_rho_r: str = "1/5"
    schedule_rho_w: str = "1/5"


class ReliabilitySection(BaseModel):
    errors: Optional[int] = None


Mode = Literal["roundtrip", "secrecy", "amd", "ses", "bounds", "reliability"]


class ExperimentConfig(BaseModel):
    mode: Mode
    seed: int = Field(0, ge=0, lt=2**64)
    trials: int = Field(1, ge=1)
    workers: Optional[int] = Field(None, ge=1)
    params: Optional[ParamsSpec] = None
    strategy: list[StrategySpec] = Field(default_factory=lambda: [StrategySpec()])
    secrecy: SecrecySection = Field(default_factory=SecrecySection)
    amd: AmdSection = Field(default_factory=AmdSection)
    ses: SesSection = Field(default_factory=SesSection)
    bounds: BoundsSection = Field(default_factory=BoundsSection)
    reliability: ReliabilitySection = Field(default_factory=ReliabilitySection)

    @field_validator("strategy", mode="before")
    @classmethod
    def _one_or_many(cls, value: Any) -> Any:
        if isinstance(value, (dict, StrategySpec)):
            return [value]
        return value

    @model_validator(mode="after")
    def _params_present(self) -> "ExperimentConfig":
        if self.mode in ("roundtrip", "reliability") and self.params is None:
            raise ValueError(f"mode {self.mode!r} needs a 'params' section")
        if not self.strategy:
            raise ValueError("at least one strategy is required")
        return self

    def strategy_for(self, trial: int) -> StrategySpec:
        """Trials cycle through the configured strategies."""
        return self.strategy[trial % len(self.strategy)]

    @classmethod
    def load(cls, path: Path | str, **overrides: Any) -> "ExperimentConfig":
        """Load YAML (.yml/.yaml) or JSON; ``overrides`` with value None are ignored."""
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
        except (json.JSONDecodeError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must contain a mapping")
        return cls.from_dict(data, **overrides)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **overrides: Any) -> "ExperimentConfig":
        merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
        try:
            return cls.model_validate(merged)
        except ValidationError as exc:
            raise ConfigError(f"invalid experiment config: {exc}") from exc
