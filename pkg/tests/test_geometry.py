"""Single-image deformation kernel tests.

Golden arrays were generated by the brute-force reference in
tests/reference.py and frozen; hand-derivable entries were checked on
paper first. Property campaigns compare the production kernel against the
reference bit for bit.
"""

import numpy as np
import pytest

from loma import DeformationSpec, Interp, Shape, apply_deformation, map_source, region_contains, sample
from loma.geometry import region_source_grid

from reference import oracle_apply

# 5x5 ramp 0..24, rhombus, center (2,2), r=2, a_x=a_y=1 (frozen from the
# reference oracle; the magnified center value spreads to the 4-neighbors).
G5_NEAREST = [
    [0, 1, 2, 3, 4],
    [5, 6, 12, 8, 9],
    [10, 12, 12, 13, 14],
    [15, 16, 17, 18, 19],
    [20, 21, 22, 23, 24],
]
G5_BILINEAR = [
    [0, 1, 2, 3, 4],
    [5, 6, 10, 8, 9],
    [10, 12, 12, 13, 14],
    [15, 16, 15, 18, 19],
    [20, 21, 22, 23, 24],
]
# Same image, ellipse with a_x=2, a_y=1, bilinear.
G5_ELLIPSE = [
    [0, 1, 2, 3, 4],
    [5, 8, 10, 9, 9],
    [10, 12, 12, 13, 14],
    [15, 15, 15, 16, 19],
    [20, 21, 22, 23, 24],
]


def ramp5():
    return np.arange(25, dtype=np.uint8).reshape(5, 5)


def random_spec(rng, width, height, force_shape=None):
    shape = force_shape or ("rhombus" if rng.integers(2) else "ellipse")
    a = float(rng.uniform(1.0, 3.0))
    on_x = bool(rng.integers(2))
    return DeformationSpec(
        x_c=float(rng.integers(0, width)),
        y_c=float(rng.integers(0, height)),
        r=float(rng.uniform(0.5, max(height, width))),
        shape=shape,
        a_x=a if on_x else 1.0,
        a_y=1.0 if on_x else a,
    )


# ------------------------------------------------------------ membership


def test_center_always_inside():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="rhombus", a_x=1, a_y=3)
    assert region_contains(16, 16, spec)


def test_rhombus_weighted_l1():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="rhombus", a_x=1, a_y=3)
    assert region_contains(18, 17, spec)  # 1*2 + 3*1 = 5 < 8
    assert not region_contains(16, 19, spec)  # 3*3 = 9 >= 8


def test_ellipse_boundary_excluded():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="ellipse", a_x=1, a_y=3)
    assert not region_contains(24, 16, spec)  # 64 is not < 64
    assert region_contains(23.999, 16, spec)


def test_integer_membership_is_l1_ball():
    spec = DeformationSpec(x_c=2, y_c=2, r=2, shape="rhombus")
    members = [
        (x, y) for x in range(5) for y in range(5) if region_contains(x, y, spec)
    ]
    assert sorted(members) == [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]


# ------------------------------------------------------------ map_source


def test_center_is_fixed_point():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="rhombus")
    assert map_source(16, 16, spec) == (16.0, 16.0)


def test_map_source_on_axis():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="rhombus")
    assert map_source(20, 16, spec) == (18.0, 16.0)  # d=4, d/r=0.5


def test_map_source_off_axis():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="rhombus")
    assert map_source(19, 20, spec) == (17.875, 18.5)  # d=5, d/r=0.625


def test_map_source_rejects_outside():
    spec = DeformationSpec(x_c=16, y_c=16, r=8, shape="rhombus")
    with pytest.raises(ValueError):
        map_source(30, 16, spec)


def test_contraction_and_bounds_campaign():
    rng = np.random.default_rng(31337)
    checked = 0
    while checked < 2000:
        w = int(rng.integers(4, 64))
        h = int(rng.integers(4, 64))
        spec = random_spec(rng, w, h)
        x = float(rng.uniform(0, w - 1))
        y = float(rng.uniform(0, h - 1))
        if not region_contains(x, y, spec):
            continue
        d_in = np.hypot(x - spec.x_c, y - spec.y_c)
        if d_in == 0:
            continue
        sx, sy = map_source(x, y, spec)
        d_out = np.hypot(sx - spec.x_c, sy - spec.y_c)
        assert d_out < d_in, (spec, x, y)
        assert 0 <= sx <= w - 1 and 0 <= sy <= h - 1
        checked += 1


def test_radial_monotonic_no_foldover():
    spec = DeformationSpec(x_c=10, y_c=10, r=9, shape="rhombus")
    dists = []
    for step in range(1, 9):
        x = 10 + step * 0.7
        sx, sy = map_source(x, 10, spec)
        dists.append(sx - 10)
    assert dists == sorted(dists)
    assert len(set(dists)) == len(dists)


# ------------------------------------------------------------ sample


def test_sample_integer_coordinate_exact():
    img = ramp5()[:, :, None]
    for interp in (Interp.NEAREST, Interp.BILINEAR):
        v = sample(img, 3.0, 2.0, interp)
        # y=2 -> row 2 on a 5-row image
        assert v[0] == img[2, 3, 0]


def test_sample_nearest_rounds_half_up():
    img = ramp5()[:, :, None]
    assert sample(img, 2.5, 2.0, Interp.NEAREST)[0] == img[2, 3, 0]


def test_sample_bilinear_hand_case():
    img = np.zeros((5, 5, 1), dtype=np.uint8)
    img[2, 2, 0] = 100  # (x=2, y=2)
    img[2, 3, 0] = 200  # (x=3, y=2)
    assert sample(img, 2.25, 2.0, Interp.BILINEAR)[0] == 125


def test_sample_out_of_bounds_rejected():
    img = ramp5()[:, :, None]
    with pytest.raises(ValueError):
        sample(img, 5.0, 0.0)
    with pytest.raises(ValueError):
        sample(img, 0.0, -0.1)


# ------------------------------------------------------------ apply


def test_empty_region_is_identity():
    img = ramp5()[:, :, None]
    spec = DeformationSpec(x_c=2.5, y_c=2.5, r=0.3, shape="rhombus")
    out = apply_deformation(img, spec, interp=Interp.NEAREST)
    assert np.array_equal(out, img)
    assert out is not img


def test_golden_5x5_nearest():
    out = apply_deformation(
        ramp5(), DeformationSpec(x_c=2, y_c=2, r=2, shape="rhombus"), Interp.NEAREST
    )
    assert out.tolist() == G5_NEAREST


def test_golden_5x5_bilinear():
    out = apply_deformation(
        ramp5(), DeformationSpec(x_c=2, y_c=2, r=2, shape="rhombus"), Interp.BILINEAR
    )
    assert out.tolist() == G5_BILINEAR


def test_golden_5x5_ellipse():
    spec = DeformationSpec(x_c=2, y_c=2, r=2, shape="ellipse", a_x=2, a_y=1)
    out = apply_deformation(ramp5(), spec, Interp.BILINEAR)
    assert out.tolist() == G5_ELLIPSE


def test_matches_oracle_campaign():
    rng = np.random.default_rng(777)
    for trial in range(20):
        h = int(rng.integers(4, 24))
        w = int(rng.integers(4, 24))
        c = int(rng.integers(1, 5))
        if trial % 2:
            img = rng.integers(0, 256, (h, w, c), dtype=np.uint8)
        else:
            img = rng.random((h, w, c), dtype=np.float32)
        spec = random_spec(rng, w, h)
        for interp in ("nearest", "bilinear"):
            got = apply_deformation(img, spec, interp)
            want = oracle_apply(
                img, spec.x_c, spec.y_c, spec.r, spec.shape.value, spec.a_x, spec.a_y, interp
            )
            assert np.array_equal(got, want), (trial, spec, interp)


def test_outside_region_untouched_campaign():
    rng = np.random.default_rng(2112)
    for _ in range(20):
        h = int(rng.integers(4, 40))
        w = int(rng.integers(4, 40))
        img = rng.integers(0, 256, (h, w, 3), dtype=np.uint8)
        spec = random_spec(rng, w, h)
        before = img.copy()
        out = apply_deformation(img, spec)
        assert np.array_equal(img, before)  # input never mutated
        assert out.shape == img.shape and out.dtype == img.dtype
        rows, cols, _, _ = region_source_grid(spec, w, h)
        mask = np.ones((h, w), dtype=bool)
        mask[rows, cols] = False
        assert np.array_equal(out[mask], img[mask])


def test_nearest_value_provenance():
    rng = np.random.default_rng(4)
    for _ in range(10):
        h, w = int(rng.integers(6, 30)), int(rng.integers(6, 30))
        img = rng.integers(0, 256, (h, w, 1), dtype=np.uint8)
        spec = random_spec(rng, w, h)
        rows, cols, _, _ = region_source_grid(spec, w, h)
        if rows.size == 0:
            continue
        out = apply_deformation(img, spec, Interp.NEAREST)
        region_values = set(img[rows, cols, 0].tolist())
        assert set(out[rows, cols, 0].tolist()) <= region_values


def test_integer_center_fixed_in_nearest():
    rng = np.random.default_rng(88)
    for _ in range(10):
        h, w = int(rng.integers(4, 32)), int(rng.integers(4, 32))
        img = rng.integers(0, 256, (h, w, 2), dtype=np.uint8)
        spec = random_spec(rng, w, h)
        out = apply_deformation(img, spec, Interp.NEAREST)
        row_c = (h - 1) - int(spec.y_c)
        assert np.array_equal(out[row_c, int(spec.x_c)], img[row_c, int(spec.x_c)])


def test_region_may_overhang_image():
    img = ramp5()
    spec = DeformationSpec(x_c=0, y_c=0, r=10, shape="rhombus")
    out = apply_deformation(img, spec, Interp.NEAREST)
    assert out.shape == img.shape  # no clamp errors; corners still in range
    assert out.dtype == np.uint8


def test_grayscale_2d_matches_3d():
    img = ramp5()
    spec = DeformationSpec(x_c=2, y_c=2, r=2, shape="rhombus")
    out2 = apply_deformation(img, spec, Interp.BILINEAR)
    out3 = apply_deformation(img[:, :, None], spec, Interp.BILINEAR)
    assert np.array_equal(out2, out3[:, :, 0])


def test_spec_validation():
    with pytest.raises(ValueError):
        DeformationSpec(x_c=0, y_c=0, r=0, shape="rhombus")
    with pytest.raises(ValueError):
        DeformationSpec(x_c=0, y_c=0, r=-1, shape="rhombus")
    with pytest.raises(ValueError):
        DeformationSpec(x_c=0, y_c=0, r=1, shape="rhombus", a_x=0.5)
    with pytest.raises(ValueError):
        DeformationSpec(x_c=float("nan"), y_c=0, r=1, shape="rhombus")
    with pytest.raises(ValueError):
        DeformationSpec(x_c=0, y_c=0, r=1, shape="hexagon")


def test_apply_rejects_bad_inputs():
    img = ramp5()
    with pytest.raises(ValueError):
        apply_deformation(img, DeformationSpec(x_c=9, y_c=2, r=1, shape="rhombus"))
    with pytest.raises(ValueError):
        apply_deformation(
            np.zeros((4, 4, 5), dtype=np.uint8),
            DeformationSpec(x_c=1, y_c=1, r=1, shape="rhombus"),
        )
    with pytest.raises(ValueError):
        apply_deformation(
            np.zeros((4, 4), dtype=np.int32),
            DeformationSpec(x_c=1, y_c=1, r=1, shape="rhombus"),
        )


def test_spec_dict_round_trip():
    spec = DeformationSpec(x_c=3, y_c=4, r=2.5, shape="ellipse", a_x=1.0, a_y=2.0)
    assert DeformationSpec.from_dict(spec.to_dict()) == spec
