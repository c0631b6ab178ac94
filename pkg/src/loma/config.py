"""Configuration for the stochastic augmentation policy.

Defaults follow the published recipe for 32x32 classification
(p=0.5, r in [0.03, 0.7] of the long side, one axis ratio in [1, 3]);
the "imagenet" preset raises the gate probability to 0.8 and the
"detection" preset uses p=0.25, r_max=0.5 with compression disabled.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .geometry import Interp, Shape


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class LomaConfig:
    """Image-space policy: gate probability plus sampling ranges."""

    p: float = 0.5
    shape: Shape = Shape.RHOMBUS
    r_min: float = 0.03
    r_max: float = 0.7
    a_min: float = 1.0
    a_max: float = 3.0
    interp: Interp = Interp.BILINEAR

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p: must be in [0, 1], got {self.p}")
        if not 0.0 < self.r_min <= self.r_max:
            raise ConfigError(
                f"r_min/r_max: need 0 < r_min <= r_max, got {self.r_min}, {self.r_max}"
            )
        if self.a_min < 1.0:
            raise ConfigError(f"a_min: must be >= 1, got {self.a_min}")
        if self.a_max < self.a_min:
            raise ConfigError(
                f"a_max: must be >= a_min, got {self.a_max} < {self.a_min}"
            )
        for name, value, enum in (("shape", self.shape, Shape), ("interp", self.interp, Interp)):
            if not isinstance(value, enum):
                try:
                    object.__setattr__(self, name, enum(value))
                except ValueError:
                    choices = ", ".join(m.value for m in enum)
                    raise ConfigError(f"{name}: unknown value {value!r} (expected {choices})") from None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "shape": self.shape.value,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "a_min": self.a_min,
            "a_max": self.a_max,
            "interp": self.interp.value,
        }


@dataclass(frozen=True)
class FeatureAugConfig:
    """Feature-space policy.

    p_f gates each mini-batch; gamma scales the offset range as a fraction
    of the long side. block_index records which network block the tensors
    come from (informational; block 2 is the recommended hook point).
    """

    p_f: float = 0.5
    gamma: float = 0.25
    block_index: int = 2
    per: str = "batch"

    def __post_init__(self):
        if not 0.0 <= self.p_f <= 1.0:
            raise ConfigError(f"feature.p_f: must be in [0, 1], got {self.p_f}")
        if self.gamma < 0.0:
            raise ConfigError(f"feature.gamma: must be >= 0, got {self.gamma}")
        if self.per != "batch":
            raise ConfigError(f"feature.per: only 'batch' is supported, got {self.per!r}")

    def to_dict(self) -> dict:
        return {"p_f": self.p_f, "gamma": self.gamma, "per": self.per}


_TOP_KEYS = {"p", "shape", "r_min", "r_max", "a_min", "a_max", "interp", "feature"}
_FEATURE_KEYS = {"p_f", "gamma", "per"}

PRESETS = ("cifar", "imagenet", "detection")


def preset(name: str) -> tuple[LomaConfig, FeatureAugConfig]:
    """Named configuration presets ("cifar", "imagenet", "detection")."""
    base = LomaConfig()
    if name == "cifar":
        return base, FeatureAugConfig()
    if name == "imagenet":
        return replace(base, p=0.8), FeatureAugConfig()
    if name == "detection":
        return replace(base, p=0.25, r_max=0.5, a_max=1.0), FeatureAugConfig()
    raise ConfigError(f"preset: unknown name {name!r} (expected {', '.join(PRESETS)})")


def load_config(source) -> tuple[LomaConfig, FeatureAugConfig]:
    """Load and validate a JSON config document.

    `source` may be a mapping, a filesystem path, or JSON text (text is
    assumed when the string is empty or starts with '{' or '['). Absent
    keys take the defaults; unknown keys are rejected so typos cannot
    silently pass.
    """
    if isinstance(source, (dict,)):
        doc = source
    else:
        text = str(source)
        if text.strip() and text.lstrip()[0] not in "{[":
            text = Path(source).read_text()
        try:
            doc = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")

    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")
    feature_doc = doc.get("feature", {})
    if not isinstance(feature_doc, dict):
        raise ConfigError("feature: must be an object")
    unknown = set(feature_doc) - _FEATURE_KEYS
    if unknown:
        raise ConfigError(f"unknown config key 'feature.{sorted(unknown)[0]}'")

    loma_kwargs = {k: doc[k] for k in doc if k != "feature"}
    cfg = LomaConfig(**loma_kwargs)
    fcfg = FeatureAugConfig(**feature_doc)
    return cfg, fcfg
