"""Deterministic local-magnification augmentation for images and feature maps."""

from .config import (
    ConfigError,
    FeatureAugConfig,
    LomaConfig,
    PRESETS,
    load_config,
    preset,
)
from .features import (
    OffsetSpec,
    apply_deformation_batch,
    apply_offset,
    feature_augment,
    feature_offset,
    loma_f,
    sample_offset,
)
from .geometry import (
    DeformationSpec,
    Interp,
    Shape,
    apply_deformation,
    map_source,
    region_contains,
    region_source_grid,
    sample,
)
from .pipeline import ItemRecord, RunReport, WorkItem, plan_items, process_item, run_batch
from .rng import RngStream, mix64
from .sampling import maybe_augment, sample_spec
from .tensorfile import (
    BadMagicError,
    TensorFileError,
    TruncatedPayloadError,
    UnsupportedFormatError,
    read_tensor,
    write_tensor,
)

__version__ = "0.1.0"

__all__ = [
    "BadMagicError",
    "ConfigError",
    "DeformationSpec",
    "FeatureAugConfig",
    "Interp",
    "ItemRecord",
    "LomaConfig",
    "OffsetSpec",
    "PRESETS",
    "RngStream",
    "RunReport",
    "Shape",
    "TensorFileError",
    "TruncatedPayloadError",
    "UnsupportedFormatError",
    "WorkItem",
    "apply_deformation",
    "apply_deformation_batch",
    "apply_offset",
    "feature_augment",
    "feature_offset",
    "load_config",
    "loma_f",
    "map_source",
    "maybe_augment",
    "mix64",
    "plan_items",
    "preset",
    "process_item",
    "read_tensor",
    "region_contains",
    "region_source_grid",
    "run_batch",
    "sample",
    "sample_offset",
    "sample_spec",
    "write_tensor",
]
