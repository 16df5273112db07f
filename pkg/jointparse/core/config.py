"""Configuration models and loading.

Responsibilities:
1. Typed, validated configuration objects (model shape, training, run options).
2. Loading from a `key = value` text file, `JOINTPARSE_*` environment
   variables and explicit overrides (CLI flags), in increasing precedence.
3. Backward compatibility shim for renamed keys.
4. Flat snapshot of the effective configuration for logs and checkpoints.
"""
from __future__ import annotations

import os
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from jointparse.core.errors import ConfigError

ENV_PREFIX = "JOINTPARSE_"

# Old -> new key mapping for backward compatibility
_BACKCOMPAT_KEYS: Dict[str, str] = {
    "learning_rate": "lr",
    "batch": "batch_size",
    "n_epochs": "epochs",
    "decay": "weight_decay",
    "k": "mlp_dim",
}

DEFAULT_PUNCT_TAGS: Tuple[str, ...] = (",", ".", ":", "``", "''", "-LRB-", "-RRB-")


class ModelConfig(BaseModel):
    word_dim: int = Field(64, gt=0, description="Encoder output dim (split in two halves)")
    ff_dim: int = Field(128, gt=0, description="Encoder feedforward hidden size")
    mlp_dim: int = Field(100, gt=0, description="k: boundary/head/mod MLP output size")
    span_mlp_dim: int = Field(100, gt=0, description="word/span MLP output size")
    leaky_slope: float = Field(0.1, ge=0.0, lt=1.0)
    init_range: float = Field(0.1, ge=0.0)
    seed: int = Field(1, ge=0)
    max_len: int = Field(256, gt=1, description="Position embedding rows (tokens + bos/eos)")

    @field_validator("word_dim")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("word_dim must be even (forward/backward halves)")
        return v


class TrainConfig(BaseModel):
    lr: float = Field(0.05, ge=0.0)
    momentum: float = Field(0.9, ge=0.0, lt=1.0)
    epochs: int = Field(50, gt=0)
    batch_size: int = Field(8, gt=0)
    span_cost: float = Field(1.0, ge=0.0)
    arc_cost: float = Field(1.0, ge=0.0)
    seed: int = Field(1, ge=0)
    weight_decay: float = Field(0.0, ge=0.0)
    label_weight: float = Field(1.0, ge=0.0)
    second_order: bool = False
    objective: str = Field("joint", description="joint | mtl")
    workers: int = Field(1, ge=1)

    @field_validator("objective")
    @classmethod
    def _objective(cls, v: str) -> str:
        v = v.lower()
        if v not in ("joint", "mtl"):
            raise ValueError("objective must be 'joint' or 'mtl'")
        return v

    @model_validator(mode="after")
    def _mtl_first_order(self) -> "TrainConfig":
        if self.objective == "mtl" and self.second_order:
            raise ValueError("the mtl objective is first-order only")
        return self


class RunConfig(BaseModel):
    punct_tags: List[str] = Field(default_factory=lambda: list(DEFAULT_PUNCT_TAGS))
    trials: int = Field(100, gt=0)
    log_level: str = "INFO"
    decoder: str = Field("joint", description="joint | separate")

    @field_validator("punct_tags", mode="before")
    @classmethod
    def _split_tags(cls, v: Any) -> Any:
        if isinstance(v, str):
            # whitespace-separated: "," is itself a punctuation tag
            return v.split()
        return v

    @field_validator("decoder")
    @classmethod
    def _decoder(cls, v: str) -> str:
        v = v.lower()
        if v not in ("joint", "separate"):
            raise ValueError("decoder must be 'joint' or 'separate'")
        return v


class JointParseConfig(BaseModel):
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    run: RunConfig = Field(default_factory=RunConfig)


_SECTIONS = {
    "model": ModelConfig,
    "train": TrainConfig,
    "run": RunConfig,
}


def apply_backward_compat_keys(raw: Dict[str, Any]) -> List[Tuple[str, str]]:
    """Rename legacy keys in place (old -> new) unless the new key is already set.

    Returns list of (old, new) pairs applied.
    """
    applied: List[Tuple[str, str]] = []
    for old, new in _BACKCOMPAT_KEYS.items():
        if old in raw:
            value = raw.pop(old)
            if new not in raw:
                raw[new] = value
                applied.append((old, new))
    return applied


def parse_config_text(text: str) -> Dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment, blank lines are ignored."""
    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = stripped.split("=", 1)
        values[key.strip().lower()] = value.strip()
    return values


def read_config_file(path: str) -> Dict[str, str]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_config_text(f.read())


def _known_keys() -> Dict[str, str]:
    owner: Dict[str, str] = {}
    for section, model in _SECTIONS.items():
        for name in model.model_fields:
            # `seed` is shared: a flat `seed` key sets both model and training seeds
            owner.setdefault(name, section)
    return owner


def env_overrides(env: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
    env = os.environ if env is None else env
    keys = set(_known_keys()) | set(_BACKCOMPAT_KEYS)
    found: Dict[str, str] = {}
    for k, v in env.items():
        if k.startswith(ENV_PREFIX):
            key = k[len(ENV_PREFIX):].lower()
            if key in keys:
                found[key] = v
    return found


def build_config(values: Mapping[str, Any]) -> JointParseConfig:
    """Route flat keys to their section and validate."""
    raw = {k: v for k, v in values.items() if v is not None}
    apply_backward_compat_keys(raw)
    owner = _known_keys()
    sections: Dict[str, Dict[str, Any]] = {name: {} for name in _SECTIONS}
    for key, value in raw.items():
        if key not in owner:
            raise ConfigError(f"unknown configuration key {key!r}")
        if key == "seed":
            sections["model"]["seed"] = value
            sections["train"]["seed"] = value
            continue
        sections[owner[key]][key] = value
    try:
        return JointParseConfig(
            model=ModelConfig(**sections["model"]),
            train=TrainConfig(**sections["train"]),
            run=RunConfig(**sections["run"]),
        )
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def load_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    env: Optional[Mapping[str, str]] = None,
) -> JointParseConfig:
    """Defaults < config file < JOINTPARSE_* env < explicit overrides."""
    merged: Dict[str, Any] = {}
    if path:
        file_values = read_config_file(path)
        apply_backward_compat_keys(file_values)  # type: ignore[arg-type]
        merged.update(file_values)
    env_values: Dict[str, Any] = env_overrides(env)
    apply_backward_compat_keys(env_values)
    merged.update(env_values)
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(merged)


def config_snapshot(cfg: JointParseConfig) -> Dict[str, Any]:
    """Flat `section.key -> value` view for logging and checkpoint headers."""
    snapshot: Dict[str, Any] = {}
    for section in _SECTIONS:
        for k, v in getattr(cfg, section).model_dump().items():
            snapshot[f"{section}.{k}"] = v
    return snapshot


__all__ = [
    "ModelConfig",
    "TrainConfig",
    "RunConfig",
    "JointParseConfig",
    "DEFAULT_PUNCT_TAGS",
    "apply_backward_compat_keys",
    "parse_config_text",
    "read_config_file",
    "env_overrides",
    "build_config",
    "load_config",
    "config_snapshot",
]
