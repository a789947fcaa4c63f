"""Pixel primitives: grids, flips, crops, masks, label marks, depth normalization."""

import numpy as np
import pytest
from PIL import Image as PILImage

from spatial_forge import imaging
from spatial_forge.errors import (
    DegenerateImage,
    DimensionMismatch,
    EmptyRect,
    ImageTooSmall,
    IndexOutOfRange,
    InsufficientValidDepth,
    InvalidPermutation,
    OutOfBounds,
)
from conftest import textured_rgb


class TestGates:
    def test_require_rgb(self):
        with pytest.raises(DimensionMismatch):
            imaging.require_rgb(np.zeros((10, 10), dtype=np.uint8))
        with pytest.raises(DimensionMismatch):
            imaging.require_rgb(np.zeros((10, 10, 3), dtype=np.float64))
        imaging.require_rgb(np.zeros((10, 10, 3), dtype=np.uint8))

    def test_min_size(self):
        imaging.check_min_size(textured_rgb(64, 64))
        with pytest.raises(ImageTooSmall):
            imaging.check_min_size(textured_rgb(63, 200))
        with pytest.raises(ImageTooSmall):
            imaging.check_min_size(textured_rgb(200, 63))

    def test_texture(self):
        imaging.check_texture(textured_rgb())
        flat = np.full((100, 100, 3), 128, dtype=np.uint8)
        with pytest.raises(DegenerateImage):
            imaging.check_texture(flat)


class TestGrid:
    def test_center_trim_oracle(self):
        img = textured_rgb(201, 257)
        trimmed = imaging.center_trim(img, 2, 2)
        # oracle: largest divisible size, centered with the floor'd offset
        assert trimmed.shape == (200, 256, 3)
        assert np.array_equal(trimmed, img[0:200, 0:256])

        trimmed = imaging.center_trim(textured_rgb(203, 258), 4, 4)
        assert trimmed.shape == (200, 256, 3)

    def test_center_trim_exact_fit_is_copy(self):
        img = textured_rgb(200, 256)
        trimmed = imaging.center_trim(img, 2, 2)
        assert np.array_equal(trimmed, img)
        trimmed[0, 0, 0] ^= 255
        assert not np.array_equal(trimmed, img)  # copy, not a view

    def test_partition_row_major(self):
        img = textured_rgb(100, 200)
        patches = imaging.partition(img, 2, 2)
        assert len(patches) == 4
        assert np.array_equal(patches[0], img[:50, :100])
        assert np.array_equal(patches[1], img[:50, 100:])   # k = i*cols + j
        assert np.array_equal(patches[2], img[50:, :100])
        assert np.array_equal(patches[3], img[50:, 100:])

    def test_partition_requires_divisibility(self):
        with pytest.raises(DimensionMismatch):
            imaging.partition(textured_rgb(101, 200), 2, 2)

    def test_compose_inverts_partition(self):
        img = textured_rgb(120, 240)
        for rows, cols in [(2, 2), (1, 3), (4, 1), (3, 4)]:
            patches = imaging.partition(img, rows, cols)
            n = rows * cols
            assert np.array_equal(imaging.compose(patches, rows, cols, list(range(n))), img)

    def test_compose_then_inverse_restores(self):
        img = textured_rgb(120, 240)
        rng = np.random.Generator(np.random.Philox(key=3))
        for rows, cols in [(2, 2), (1, 4), (3, 1)]:
            n = rows * cols
            patches = imaging.partition(img, rows, cols)
            perm = [int(v) for v in rng.permutation(n)]
            shuffled_img = imaging.compose(patches, rows, cols, perm)
            shuffled_patches = imaging.partition(shuffled_img, rows, cols)
            inverse = [int(v) for v in np.argsort(perm)]
            assert np.array_equal(imaging.compose(shuffled_patches, rows, cols, inverse), img)

    def test_compose_validates_order(self):
        patches = imaging.partition(textured_rgb(100, 100), 2, 2)
        with pytest.raises(InvalidPermutation):
            imaging.compose(patches, 2, 2, [0, 0, 1, 2])

    def test_whiteout(self):
        patches = imaging.partition(textured_rgb(100, 100), 2, 2)
        out = imaging.whiteout(patches, 2)
        assert (out[2] == 255).all()
        for k in (0, 1, 3):
            assert np.array_equal(out[k], patches[k])
        with pytest.raises(IndexOutOfRange):
            imaging.whiteout(patches, 4)


class TestFlip:
    def test_directions_match_numpy(self):
        patch = textured_rgb(8, 6, key=5)
        assert np.array_equal(imaging.flip_patch(patch, imaging.VERTICAL), np.flipud(patch))
        assert np.array_equal(imaging.flip_patch(patch, imaging.HORIZONTAL), np.fliplr(patch))

    def test_involution(self):
        patch = textured_rgb(9, 7, key=6)
        for d in (imaging.VERTICAL, imaging.HORIZONTAL):
            assert np.array_equal(imaging.flip_patch(imaging.flip_patch(patch, d), d), patch)

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            imaging.flip_patch(textured_rgb(8, 8), 2)


class TestRects:
    def test_crop_oracle(self):
        img = textured_rgb(100, 120)
        assert np.array_equal(imaging.crop(img, 10, 20, 30, 40), img[10:40, 20:60])

    def test_crop_bounds(self):
        img = textured_rgb(100, 120)
        with pytest.raises(OutOfBounds):
            imaging.crop(img, 80, 0, 30, 10)
        with pytest.raises(OutOfBounds):
            imaging.crop(img, -1, 0, 10, 10)
        with pytest.raises(EmptyRect):
            imaging.crop(img, 0, 0, 0, 10)

    def test_zero_region(self):
        img = textured_rgb(100, 120)
        out = imaging.zero_region(img, 10, 20, 30, 40)
        assert (out[10:40, 20:60] == 0).all()
        mask = np.ones((100, 120), dtype=bool)
        mask[10:40, 20:60] = False
        assert np.array_equal(out[mask], img[mask])
        assert not (img[10:40, 20:60] == 0).all()  # input untouched

    def test_resize_same_size_is_exact(self):
        img = textured_rgb(64, 64)
        out = imaging.resize(img, 64, 64)
        assert np.array_equal(out, img)

    def test_resize_matches_pil_reference(self):
        img = textured_rgb(64, 64)
        out = imaging.resize(img, 32, 48)
        ref = np.asarray(
            PILImage.fromarray(img).resize((48, 32), PILImage.BILINEAR), dtype=np.uint8)
        assert out.shape == (32, 48, 3)
        assert np.array_equal(out, ref)


class TestAnnotate:
    def test_disc_and_far_pixels(self):
        img = textured_rgb(200, 256)
        out = imaging.annotate_labels(img, [(50, 60)], [1])
        radius = imaging.label_radius(200, 256)
        # top of the disc sits above the numeral's glyph box: pure disc color
        assert out[60 - radius + 1, 50].tolist() in ([0, 0, 0], [255, 255, 255])
        yy, xx = np.mgrid[0:200, 0:256]
        far = (xx - 50) ** 2 + (yy - 60) ** 2 > (9 * radius) ** 2
        assert np.array_equal(out[far], img[far])

    def test_disc_contrast_rule(self):
        dark = np.zeros((100, 100, 3), dtype=np.uint8)
        out = imaging.annotate_labels(dark, [(50, 50)], [2])
        radius = imaging.label_radius(100, 100)
        ring = out[50, 50 - radius + 1]  # inside the disc, left of the glyph
        assert (ring == 255).all()       # dark background gets a white disc

        bright = np.full((100, 100, 3), 255, dtype=np.uint8)
        out = imaging.annotate_labels(bright, [(50, 50)], [2])
        ring = out[50, 50 - radius + 1]
        assert (ring == 0).all()         # bright background gets a black disc

    def test_identical_inputs_identical_marks(self):
        img = textured_rgb(200, 256)
        a = imaging.annotate_labels(img, [(30, 40), (200, 100)], [1, 2])
        b = imaging.annotate_labels(img, [(30, 40), (200, 100)], [1, 2])
        assert np.array_equal(a, b)

    def test_center_out_of_bounds(self):
        with pytest.raises(OutOfBounds):
            imaging.annotate_labels(textured_rgb(100, 100), [(100, 50)], [1])

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            imaging.annotate_labels(textured_rgb(100, 100), [(10, 10)], [1, 2])


class TestDepthNormalization:
    def test_min_max_oracle(self):
        raw = np.array([[1.0, 2.0], [3.0, 5.0]])
        out, valid = imaging.normalize_depth(raw)
        assert valid.all()
        assert np.allclose(out, (raw - 1.0) / 4.0)
        assert out.min() == 0.0 and out.max() == 1.0

    def test_invalid_pixels_excluded_and_zeroed(self):
        raw = np.array([[np.nan, 2.0], [0.0, 4.0], [-3.0, 6.0]])
        out, valid = imaging.normalize_depth(raw)
        assert valid.tolist() == [[False, True], [False, True], [False, True]]
        assert out[0, 0] == 0.0 and out[1, 0] == 0.0 and out[2, 0] == 0.0
        assert np.allclose(out[:, 1], [0.0, 0.5, 1.0])

    def test_explicit_mask_intersects_finiteness(self):
        raw = np.array([[1.0, np.inf], [3.0, 4.0]])
        mask = np.array([[True, True], [True, False]])
        out, valid = imaging.normalize_depth(raw, mask)
        assert valid.tolist() == [[True, False], [True, False]]
        assert np.allclose(out[:, 0], [0.0, 1.0])

    def test_constant_depth_is_all_zero(self):
        out, valid = imaging.normalize_depth(np.full((10, 10), 4.2))
        assert valid.all()
        assert (out == 0.0).all()

    def test_insufficient_valid_raises(self):
        raw = np.zeros((10, 10))
        raw[:2, :] = 1.0  # only 20% positive
        with pytest.raises(InsufficientValidDepth):
            imaging.normalize_depth(raw)

    def test_requires_2d(self):
        with pytest.raises(DimensionMismatch):
            imaging.normalize_depth(np.zeros((4, 4, 2)))


class TestPngIo:
    def test_round_trip_bit_exact(self, tmp_path):
        img = textured_rgb(90, 110, key=9)
        p = tmp_path / "x.png"
        imaging.save_png(p, img)
        assert np.array_equal(imaging.load_png(p), img)
