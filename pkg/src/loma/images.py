"""Image file decode/encode.

Inputs may be PNG or JPEG; outputs are always PNG so that the augmented
bytes are a pure function of the input pixels (re-encoding to JPEG would
break bit-exact reproducibility). Pixels are handled as (H, W, C) uint8
with C in 1..4; palette and exotic modes are converted on load.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

_MODE_FOR_CHANNELS = {1: "L", 2: "LA", 3: "RGB", 4: "RGBA"}

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


def load_image(path) -> np.ndarray:
    """Decode to a (H, W, C) uint8 array."""
    with Image.open(path) as im:
        if im.mode not in _MODE_FOR_CHANNELS.values():
            has_alpha = "A" in im.mode or (
                im.mode == "P" and "transparency" in im.info
            )
            im = im.convert("RGBA" if has_alpha else "RGB")
        arr = np.asarray(im, dtype=np.uint8)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr


def save_png(path, img: np.ndarray) -> None:
    """Encode a (H, W, C) or (H, W) uint8 array as PNG."""
    if img.dtype != np.uint8:
        raise ValueError(f"PNG output requires uint8 pixels, got {img.dtype}")
    if img.ndim == 3 and img.shape[2] == 1:
        img = img[:, :, 0]
    mode = "L" if img.ndim == 2 else _MODE_FOR_CHANNELS[img.shape[2]]
    Image.fromarray(img, mode=mode).save(Path(path), format="PNG")
