"""Random sampling of magnification events and the probability gate.

Draw order is pinned so that identical (seed, index, config) always yield
identical results, across languages and worker counts:

    gate u0   (maybe_augment only)
    u1 -> x_c = floor(u1 * W), clamped to W-1
    u2 -> y_c = floor(u2 * H), clamped to H-1
    u3 -> r   = (r_min + u3 * (r_max - r_min)) * max(H, W)
    u4 -> axis coin: u4 > 0.5 puts the drawn ratio on a_x, else on a_y
    u5 -> ratio = a_min + u5 * (a_max - a_min)

The gate always consumes exactly one draw, so gated-off items leave the
stream aligned with gated-on ones.
"""

from __future__ import annotations

import math

import numpy as np

from .config import LomaConfig
from .geometry import DeformationSpec, apply_deformation
from .rng import RngStream


def sample_spec(
    rng: RngStream, cfg: LomaConfig, width: int, height: int
) -> DeformationSpec:
    """Draw one magnification event for an image of the given size.

    The center lands on the integer pixel grid, uniform over the whole
    image; the region may overhang the borders.
    """
    if width < 1 or height < 1:
        raise ValueError(f"image size must be >= 1, got {width}x{height}")
    x_c = min(math.floor(rng.uniform() * width), width - 1)
    y_c = min(math.floor(rng.uniform() * height), height - 1)
    r = rng.uniform_in(cfg.r_min, cfg.r_max) * max(height, width)
    coin = rng.uniform()
    ratio = rng.uniform_in(cfg.a_min, cfg.a_max)
    if coin > 0.5:
        a_x, a_y = ratio, 1.0
    else:
        a_x, a_y = 1.0, ratio
    return DeformationSpec(
        x_c=float(x_c), y_c=float(y_c), r=r, shape=cfg.shape, a_x=a_x, a_y=a_y
    )


def maybe_augment(
    img: np.ndarray, cfg: LomaConfig, rng: RngStream
) -> tuple[np.ndarray, DeformationSpec | None]:
    """Gate on cfg.p, then magnify a random region.

    Draws the gate value first; if it is >= p the input array is returned
    unchanged (not copied) with no spec. Consumes 1 draw when gated off
    and 6 when gated on.
    """
    if rng.uniform() >= cfg.p:
        return img, None
    height, width = img.shape[:2]
    spec = sample_spec(rng, cfg, width, height)
    return apply_deformation(img, spec, cfg.interp), spec
