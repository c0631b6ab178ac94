"""Core local-magnification geometry on a single image.

A magnification event is described by a center (x_c, y_c), a radius r, a
preset shape (rhombus or ellipse) and per-axis compression ratios
(a_x, a_y). Pixels inside the deformation region are rewritten by inverse
mapping: the output pixel at distance d from the center reads the input at
distance d^2/r along the same ray, which magnifies content near the center.

Coordinates in the public contract use a bottom-left origin with x to the
right and y up; integer coordinates address pixel centers. Arrays are
stored row-major with row 0 at the top, so row = (H-1) - y. The region
tests and the mapping are symmetric under this flip, which makes the
stored-array kernel a direct mirror of the public-frame math.

Ratios below 1 are rejected: with a_x, a_y >= 1 every source point lies
strictly between the center and its target pixel, so no source read can
leave the image and no clamping is ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Shape(str, Enum):
    RHOMBUS = "rhombus"
    ELLIPSE = "ellipse"


class Interp(str, Enum):
    NEAREST = "nearest"
    BILINEAR = "bilinear"


@dataclass(frozen=True)
class DeformationSpec:
    """One sampled magnification event.

    x_c, y_c: magnification center, bottom-left frame.
    r:        region radius in pixels (> 0).
    shape:    preset region shape (L1 rhombus or L2 ellipse).
    a_x, a_y: axis compression ratios (>= 1); samplers leave exactly one
              of them at 1.
    """

    x_c: float
    y_c: float
    r: float
    shape: Shape
    a_x: float = 1.0
    a_y: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.x_c) and math.isfinite(self.y_c)):
            raise ValueError(f"center must be finite, got ({self.x_c}, {self.y_c})")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"r must be positive and finite, got {self.r}")
        if self.a_x < 1 or self.a_y < 1:
            raise ValueError(
                f"compression ratios must be >= 1, got a_x={self.a_x}, a_y={self.a_y}"
            )
        if not isinstance(self.shape, Shape):
            object.__setattr__(self, "shape", Shape(self.shape))

    def to_dict(self) -> dict:
        return {
            "x_c": self.x_c,
            "y_c": self.y_c,
            "r": self.r,
            "shape": self.shape.value,
            "a_x": self.a_x,
            "a_y": self.a_y,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DeformationSpec":
        return cls(
            x_c=d["x_c"],
            y_c=d["y_c"],
            r=d["r"],
            shape=Shape(d["shape"]),
            a_x=d["a_x"],
            a_y=d["a_y"],
        )


def region_contains(x: float, y: float, spec: DeformationSpec) -> bool:
    """True iff (x, y) lies strictly inside the deformation region.

    Rhombus: a_x*|x-x_c| + a_y*|y-y_c| < r
    Ellipse: a_x*(x-x_c)^2 + a_y*(y-y_c)^2 < r^2
    Boundary points are outside (strict inequality).
    """
    dx = x - spec.x_c
    dy = y - spec.y_c
    if spec.shape is Shape.RHOMBUS:
        return spec.a_x * abs(dx) + spec.a_y * abs(dy) < spec.r
    return spec.a_x * (dx * dx) + spec.a_y * (dy * dy) < spec.r * spec.r


def map_source(x: float, y: float, spec: DeformationSpec) -> tuple[float, float]:
    """Source position sampled by the region pixel (x, y).

    With d the Euclidean distance to the center, the source is
    (d/r)*(p - c) + c: the point at distance d^2/r along the ray from the
    center through p. Inside the region d < r, so the source lies strictly
    between center and target. Raises if (x, y) is outside the region.
    """
    if not region_contains(x, y, spec):
        raise ValueError(f"({x}, {y}) is outside the deformation region")
    dx = x - spec.x_c
    dy = y - spec.y_c
    d = math.sqrt(dx * dx + dy * dy)
    t = d / spec.r
    return (t * dx + spec.x_c, t * dy + spec.y_c)


def _validate_image(img: np.ndarray) -> None:
    if not isinstance(img, np.ndarray) or img.ndim not in (2, 3):
        raise ValueError("image must be a (H, W) or (H, W, C) array")
    if img.ndim == 3 and not 1 <= img.shape[2] <= 4:
        raise ValueError(f"channel count must be 1..4, got {img.shape[2]}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {img.shape}")
    if img.dtype != np.uint8 and not np.issubdtype(img.dtype, np.floating):
        raise ValueError(f"unsupported dtype {img.dtype}; use uint8 or float")


def region_source_grid(
    spec: DeformationSpec, width: int, height: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Integer region pixels within the image and their source positions.

    Returns (rows, cols, src_rows, src_cols) as flat arrays in stored-array
    coordinates (row 0 at top). Parts of the region outside the image are
    skipped. Sources are fractional; contraction keeps them in-bounds.
    """
    col_c = spec.x_c
    row_c = (height - 1) - spec.y_c

    # Region extent per axis; box widened by 1 px so float rounding in the
    # division can never drop a member pixel (the strict mask decides).
    if spec.shape is Shape.RHOMBUS:
        ext_x = spec.r / spec.a_x
        ext_y = spec.r / spec.a_y
    else:
        ext_x = spec.r / math.sqrt(spec.a_x)
        ext_y = spec.r / math.sqrt(spec.a_y)
    c_lo = max(0, int(math.floor(col_c - ext_x)) - 1)
    c_hi = min(width - 1, int(math.ceil(col_c + ext_x)) + 1)
    r_lo = max(0, int(math.floor(row_c - ext_y)) - 1)
    r_hi = min(height - 1, int(math.ceil(row_c + ext_y)) + 1)
    empty = (
        np.empty(0, dtype=np.intp),
        np.empty(0, dtype=np.intp),
        np.empty(0, dtype=np.float64),
        np.empty(0, dtype=np.float64),
    )
    if c_lo > c_hi or r_lo > r_hi:
        return empty

    rows, cols = np.meshgrid(
        np.arange(r_lo, r_hi + 1, dtype=np.intp),
        np.arange(c_lo, c_hi + 1, dtype=np.intp),
        indexing="ij",
    )
    dcol = cols.astype(np.float64) - col_c
    drow = rows.astype(np.float64) - row_c
    # |row - row_c| == |y - y_c|, so the stored-frame test equals the
    # public-frame test.
    if spec.shape is Shape.RHOMBUS:
        inside = spec.a_x * np.abs(dcol) + spec.a_y * np.abs(drow) < spec.r
    else:
        inside = spec.a_x * (dcol * dcol) + spec.a_y * (drow * drow) < spec.r * spec.r
    if not inside.any():
        return empty

    rows = rows[inside]
    cols = cols[inside]
    dcol = dcol[inside]
    drow = drow[inside]
    d = np.sqrt(dcol * dcol + drow * drow)
    t = d / spec.r
    src_cols = t * dcol + col_c
    src_rows = t * drow + row_c
    return rows, cols, src_rows, src_cols


def sample(img: np.ndarray, x: float, y: float, interp: Interp = Interp.BILINEAR):
    """Read the image at a fractional position (bottom-left frame).

    Nearest rounds each coordinate with floor(v + 0.5). Bilinear is the
    standard 4-neighbor weighted average; on uint8 images the result is
    rounded half-up and clamped to [0, 255]. The position must be inside
    [0, W-1] x [0, H-1].
    """
    _validate_image(img)
    height, width = img.shape[:2]
    if not (0 <= x <= width - 1 and 0 <= y <= height - 1):
        raise ValueError(f"sample position ({x}, {y}) out of bounds")
    row = (height - 1) - y
    values = _sample_channels_last(
        img, np.array([row], dtype=np.float64), np.array([x], dtype=np.float64), interp
    )
    return values[0]


def _sample_channels_last(
    img: np.ndarray, src_rows: np.ndarray, src_cols: np.ndarray, interp: Interp
) -> np.ndarray:
    """Gather fractional positions from a (H, W) or (H, W, C) array."""
    height, width = img.shape[:2]
    if interp is Interp.NEAREST:
        rr = np.floor(src_rows + 0.5).astype(np.intp)
        cc = np.floor(src_cols + 0.5).astype(np.intp)
        return img[rr, cc]

    r0 = np.floor(src_rows).astype(np.intp)
    c0 = np.floor(src_cols).astype(np.intp)
    fr = src_rows - r0
    fc = src_cols - c0
    r1 = np.minimum(r0 + 1, height - 1)
    c1 = np.minimum(c0 + 1, width - 1)
    if img.ndim == 3:
        fr = fr[:, None]
        fc = fc[:, None]
    v = img.astype(np.float64, copy=False)
    out = (
        (1.0 - fr) * (1.0 - fc) * v[r0, c0]
        + (1.0 - fr) * fc * v[r0, c1]
        + fr * (1.0 - fc) * v[r1, c0]
        + fr * fc * v[r1, c1]
    )
    if img.dtype == np.uint8:
        return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)
    return out.astype(img.dtype)


def apply_deformation(
    img: np.ndarray, spec: DeformationSpec, interp: Interp = Interp.BILINEAR
) -> np.ndarray:
    """Magnify the region of `img` described by `spec`.

    Pixels outside the region are copied bit-exactly; pixels inside read
    the input at their mapped source position. All reads come from the
    unmodified input. The region may overhang the image; out-of-image
    members are skipped. Returns a new array of identical shape and dtype.
    """
    _validate_image(img)
    interp = Interp(interp)
    height, width = img.shape[:2]
    if not (0 <= spec.x_c <= width - 1 and 0 <= spec.y_c <= height - 1):
        raise ValueError(
            f"center ({spec.x_c}, {spec.y_c}) outside image bounds "
            f"{width}x{height}"
        )

    out = img.copy()
    rows, cols, src_rows, src_cols = region_source_grid(spec, width, height)
    if rows.size == 0:
        return out
    out[rows, cols] = _sample_channels_last(img, src_rows, src_cols, interp)
    return out
