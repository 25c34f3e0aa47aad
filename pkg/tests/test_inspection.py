"""Tests for overlays, FAST corners and cross-modal patch pairs."""

import pytest
import numpy as np

from vtalign.core.geometry import apply, to_matrix
from vtalign.exceptions import ImageTooSmallError, NotEnoughCornersError, SizeMismatchError
from vtalign.inspection import (
    extract_patch_pairs,
    fast_detect,
    overlay_checkerboard,
    overlay_difference,
    overlay_redcyan,
    save_patch_pairs,
    segment_scores,
)
from vtalign.inspection.fast import CIRCLE
from vtalign.models.imaging import Raster
from vtalign.models.inspection import Corner
from vtalign.models.transforms import TransformMatrix, TransformParams


def brute_force_corners(r, threshold, n=9):
    """Every pixel passing the segment test, without suppression."""
    found = set()
    data = r.data
    for y in range(3, r.height - 3):
        for x in range(3, r.width - 3):
            c = data[y, x]
            ring = [data[y + dy, x + dx] for dx, dy in CIRCLE]
            for sign in (1, -1):
                passing = [sign * (p - c) > threshold for p in ring]
                doubled = passing + passing
                if any(all(doubled[i:i + n]) for i in range(16)):
                    found.add((y, x))
    return found


class TestOverlays:
    def test_redcyan_identical_is_gray(self, scene):
        rgb = overlay_redcyan(scene, scene)
        assert rgb.shape == (96, 96, 3)
        np.testing.assert_array_equal(rgb[..., 0], rgb[..., 1])
        np.testing.assert_array_equal(rgb[..., 1], rgb[..., 2])

    def test_redcyan_bright_fixed_is_red(self):
        fixed = Raster(np.array([[0.0, 255.0]]))
        moving = Raster(np.array([[255.0, 0.0]]))
        rgb = overlay_redcyan(fixed, moving)
        assert tuple(rgb[0, 1]) == (255.0, 0.0, 0.0)
        assert tuple(rgb[0, 0]) == (0.0, 255.0, 255.0)

    def test_redcyan_fringes_on_step_edge(self):
        step = np.zeros((8, 16))
        step[:, 8:] = 100.0
        shifted = np.zeros((8, 16))
        shifted[:, 10:] = 100.0
        rgb = overlay_redcyan(Raster(step), Raster(shifted))
        fringe = rgb[..., 0] != rgb[..., 1]
        assert fringe[:, 8:10].all()
        assert not fringe[:, :8].any() and not fringe[:, 10:].any()

    def test_rescales_each_input(self):
        fixed = Raster(np.array([[1000.0, 3000.0]]))
        moving = Raster(np.array([[0.5, 1.5]]))
        np.testing.assert_allclose(overlay_redcyan(fixed, moving)[0, :, 0], [0.0, 255.0])
        np.testing.assert_allclose(overlay_redcyan(fixed, moving)[0, :, 1], [0.0, 255.0])

    def test_difference_identical_is_zero(self, scene):
        assert (overlay_difference(scene, scene).data == 0.0).all()

    def test_difference_of_inverse(self):
        v = np.arange(256, dtype=np.float64).reshape(16, 16)
        diff = overlay_difference(Raster(v), Raster(255.0 - v))
        np.testing.assert_allclose(diff.data, np.abs(2 * v - 255.0))

    def test_size_mismatch(self, scene):
        other = Raster(np.zeros((10, 10)))
        with pytest.raises(SizeMismatchError):
            overlay_difference(scene, other)
        with pytest.raises(SizeMismatchError):
            overlay_redcyan(scene, other)
        with pytest.raises(SizeMismatchError):
            overlay_checkerboard(scene, other)

    def test_checkerboard_identical(self, scene):
        assert overlay_checkerboard(scene, scene, 8) == scene

    def test_checkerboard_tiles(self):
        a = Raster(np.zeros((16, 16)))
        b = Raster(np.ones((16, 16)))
        out = overlay_checkerboard(a, b, 8).data
        assert out[0, 0] == 0.0 and out[15, 15] == 0.0
        assert out[0, 15] == 1.0 and out[15, 0] == 1.0

    def test_checkerboard_full_width_tile(self):
        a = Raster(np.zeros((24, 16)))
        b = Raster(np.ones((24, 16)))
        out = overlay_checkerboard(a, b, 16).data
        ys = np.arange(24)[:, None].repeat(16, axis=1)
        np.testing.assert_array_equal(out, np.where((ys // 16) % 2 == 0, 0.0, 1.0))

    def test_checkerboard_min_tile(self, scene):
        with pytest.raises(ValueError):
            overlay_checkerboard(scene, scene, 3)


class TestFast:
    def test_constant_image(self):
        assert fast_detect(Raster(np.full((20, 20), 80.0)), 10) == []

    def test_ramp(self):
        ramp = Raster(np.tile(np.arange(32, dtype=np.float64) * 8.0, (32, 1)))
        assert fast_detect(ramp, 20) == []
        assert brute_force_corners(ramp, 20) == set()

    def test_square_corners(self, square_image):
        corners = fast_detect(square_image, 20)
        truth = [(12, 12), (12, 19), (19, 12), (19, 19)]
        assert len(corners) == 4
        for corner in corners:
            assert min(abs(corner.y - y) + abs(corner.x - x) for y, x in truth) <= 1

    def test_survivors_pass_segment_test(self, square_image, scene):
        for image, threshold in ((square_image, 20), (scene, 10)):
            oracle = brute_force_corners(image, threshold)
            for corner in fast_detect(image, threshold):
                assert (corner.y, corner.x) in oracle

    def test_border_and_order(self, scene):
        corners = fast_detect(scene, 10)
        for c in corners:
            assert 3 <= c.x < scene.width - 3 and 3 <= c.y < scene.height - 3
        assert corners == sorted(corners, key=lambda c: (c.y, c.x))

    def test_score_is_largest_passing_threshold(self, square_image):
        score, _ = segment_scores(square_image)
        y, x = np.unravel_index(np.argmax(score), score.shape)
        best = score[y, x]
        assert (y, x) in brute_force_corners(square_image, best - 1e-9)
        assert (y, x) not in brute_force_corners(square_image, best)

    def test_invalid_arguments(self, scene):
        with pytest.raises(ValueError):
            fast_detect(scene, 0)
        with pytest.raises(ImageTooSmallError):
            fast_detect(Raster(np.zeros((6, 6))), 10)


class TestPatchPairs:
    @pytest.fixture
    def corners(self):
        return [Corner(y=y, x=x, score=50.0) for y in (30, 50, 70) for x in (30, 50, 70)]

    def test_identity_gives_equal_patches(self, scene, corners):
        pairs = extract_patch_pairs(scene, scene, TransformMatrix.identity(), corners, 4, seed=0)
        assert len(pairs) == 4
        for pair in pairs:
            assert pair.visual_patch.shape == (32, 32)
            np.testing.assert_allclose(pair.thermal_patch.data, pair.visual_patch.data, atol=1e-6)

    def test_translation_moves_centers(self, scene, corners):
        m = to_matrix(TransformParams.similarity(tx=10.0))
        pairs = extract_patch_pairs(scene, scene, m, corners, 3, seed=1)
        for pair in pairs:
            vx, vy = pair.visual_center
            assert pair.thermal_center == (vx + 10.0, vy)

    def test_centers_follow_transform_exactly(self, scene, corners):
        m = to_matrix(TransformParams.similarity(q=0.05, s=1.01, tx=2.3, ty=-1.7), (47.5, 47.5))
        for pair in extract_patch_pairs(scene, scene, m, corners, 5, seed=2):
            assert pair.thermal_center == apply(m, pair.visual_center)

    def test_border_corner_skipped(self, scene, corners):
        near_border = [Corner(y=5, x=48, score=90.0)]
        with pytest.raises(NotEnoughCornersError):
            extract_patch_pairs(scene, scene, TransformMatrix.identity(), near_border, 1, seed=0)
        pairs = extract_patch_pairs(scene, scene, TransformMatrix.identity(),
                                    near_border + corners, 9, seed=0)
        assert (48, 5) not in [p.visual_center for p in pairs]

    def test_thermal_window_must_fit(self, scene, corners):
        m = to_matrix(TransformParams.similarity(tx=60.0))
        with pytest.raises(NotEnoughCornersError):
            extract_patch_pairs(scene, scene, m, corners, 1, seed=0)

    def test_seeded_selection(self, scene, corners):
        first = extract_patch_pairs(scene, scene, TransformMatrix.identity(), corners, 3, seed=7)
        second = extract_patch_pairs(scene, scene, TransformMatrix.identity(), corners, 3, seed=7)
        assert [p.visual_center for p in first] == [p.visual_center for p in second]

    def test_save(self, scene, corners, tmp_path):
        pairs = extract_patch_pairs(scene, scene, TransformMatrix.identity(), corners, 2, seed=0)
        written = save_patch_pairs(pairs, tmp_path, "frame")
        assert sorted(p.name for p in written) == [
            "frame_pair0_thm.png", "frame_pair0_vis.png",
            "frame_pair1_thm.png", "frame_pair1_vis.png",
        ]
