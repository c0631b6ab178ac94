"""Augmentation of intermediate feature maps (B, C, H, W).

Two operators: local magnification applied to every slice of a mini-batch
with one shared event (so spatial alignment across channels and samples is
preserved), and a rigid offset that translates each slice and zero-fills
the vacated cells. Both are gated jointly per mini-batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import FeatureAugConfig, LomaConfig
from .geometry import DeformationSpec, region_source_grid
from .rng import RngStream
from .sampling import sample_spec


@dataclass(frozen=True)
class OffsetSpec:
    """Whole-cell translation (t_x right, t_y up in the bottom-left frame)."""

    t_x: int
    t_y: int


def _validate_feature_map(fm: np.ndarray) -> None:
    if not isinstance(fm, np.ndarray) or fm.ndim != 4:
        raise ValueError("feature map must be a (B, C, H, W) array")
    if min(fm.shape) < 1:
        raise ValueError(f"feature map dims must all be >= 1, got {fm.shape}")
    if not np.issubdtype(fm.dtype, np.floating):
        raise ValueError(f"feature map must be floating point, got {fm.dtype}")


def apply_deformation_batch(fm: np.ndarray, spec: DeformationSpec) -> np.ndarray:
    """Apply one magnification event to every (b, c) slice, bilinear."""
    _validate_feature_map(fm)
    b, c, height, width = fm.shape
    if not (0 <= spec.x_c <= width - 1 and 0 <= spec.y_c <= height - 1):
        raise ValueError(
            f"center ({spec.x_c}, {spec.y_c}) outside feature map bounds "
            f"{width}x{height}"
        )
    out = fm.copy()
    rows, cols, src_rows, src_cols = region_source_grid(spec, width, height)
    if rows.size == 0:
        return out

    r0 = np.floor(src_rows).astype(np.intp)
    c0 = np.floor(src_cols).astype(np.intp)
    fr = src_rows - r0
    fc = src_cols - c0
    r1 = np.minimum(r0 + 1, height - 1)
    c1 = np.minimum(c0 + 1, width - 1)
    flat = fm.reshape(b * c, height, width).astype(np.float64, copy=False)
    values = (
        (1.0 - fr) * (1.0 - fc) * flat[:, r0, c0]
        + (1.0 - fr) * fc * flat[:, r0, c1]
        + fr * (1.0 - fc) * flat[:, r1, c0]
        + fr * fc * flat[:, r1, c1]
    )
    out.reshape(b * c, height, width)[:, rows, cols] = values.astype(fm.dtype)
    return out


def loma_f(fm: np.ndarray, cfg: LomaConfig, rng: RngStream) -> np.ndarray:
    """Magnify one random region, shared by the whole mini-batch.

    The event is sampled against the feature-map size (its radius scales
    with max(H_f, W_f)). Interpolation is always bilinear: feature values
    are real and duplicating activations has no benefit.
    """
    _validate_feature_map(fm)
    height, width = fm.shape[2], fm.shape[3]
    spec = sample_spec(rng, cfg, width, height)
    return apply_deformation_batch(fm, spec)


def sample_offset(rng: RngStream, gamma: float, height: int, width: int) -> OffsetSpec:
    """Draw t_x then t_y, each uniform in +-gamma*max(H, W), rounded
    half-away-from-zero to whole cells and clamped to the map size."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    bound = gamma * max(height, width)

    def draw(limit: int) -> int:
        v = rng.uniform() * 2.0 * bound - bound
        t = int(math.floor(abs(v) + 0.5)) * (1 if v >= 0 else -1)
        return max(-limit, min(limit, t))

    t_x = draw(width)
    t_y = draw(height)
    return OffsetSpec(t_x=t_x, t_y=t_y)


def apply_offset(fm: np.ndarray, off: OffsetSpec) -> np.ndarray:
    """Translate every slice by (t_x, t_y), zero-filling vacated cells.

    t_x > 0 moves content right; t_y > 0 moves it up (toward row 0 of the
    stored array). The retained window keeps its values bit-exactly.
    """
    _validate_feature_map(fm)
    height, width = fm.shape[2], fm.shape[3]
    t_x, t_y = off.t_x, off.t_y
    if abs(t_x) > width or abs(t_y) > height:
        raise ValueError(f"offset {off} exceeds feature map size {width}x{height}")
    out = np.zeros_like(fm)
    if abs(t_x) == width or abs(t_y) == height:
        return out
    # Stored rows: out[r, c] = in[r + t_y, c - t_x] where in range.
    dst_r = slice(max(0, -t_y), height - max(0, t_y))
    src_r = slice(max(0, t_y), height - max(0, -t_y))
    dst_c = slice(max(0, t_x), width - max(0, -t_x))
    src_c = slice(max(0, -t_x), width - max(0, t_x))
    out[:, :, dst_r, dst_c] = fm[:, :, src_r, src_c]
    return out


def feature_offset(fm: np.ndarray, gamma: float, rng: RngStream) -> np.ndarray:
    """Rigid random translation shared by the whole mini-batch."""
    _validate_feature_map(fm)
    height, width = fm.shape[2], fm.shape[3]
    return apply_offset(fm, sample_offset(rng, gamma, height, width))


def feature_augment(
    fm: np.ndarray, lcfg: LomaConfig, fcfg: FeatureAugConfig, rng: RngStream
) -> np.ndarray:
    """Gate on p_f, then magnification followed by offset.

    The gate consumes exactly one draw either way; when it passes, the
    magnification draws come first, then the offset draws, all from the
    same stream.
    """
    if rng.uniform() >= fcfg.p_f:
        return fm
    out = loma_f(fm, lcfg, rng)
    return feature_offset(out, fcfg.gamma, rng)
