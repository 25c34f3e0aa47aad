"""Tests for the Parzen-window joint histogram and mutual-information cost."""

import math

import pytest
import numpy as np

from vtalign.core import mimetric
from vtalign.core.geometry import image_center, to_matrix
from vtalign.core.raster import intensity_stats
from vtalign.core.resample import beta3, interpolate, prefilter
from vtalign.exceptions import InsufficientOverlapError
from vtalign.models.imaging import Raster
from vtalign.models.registration import JointHistogram, MetricConfig
from vtalign.models.transforms import TransformMatrix, TransformParams


def brute_force_joint(fixed, moving, m, bins):
    """Pixel-by-pixel Parzen accumulation over every thermal bin."""
    stats_v = intensity_stats(fixed, bins)
    stats_t = intensity_stats(moving, bins)
    coeffs = prefilter(moving)
    joint = np.zeros((bins, bins))
    for y in range(fixed.height):
        for x in range(fixed.width):
            mx = x * m.m[0, 0] + y * m.m[1, 0] + m.m[2, 0]
            my = x * m.m[0, 1] + y * m.m[1, 1] + m.m[2, 1]
            value = interpolate(coeffs, mx, my)
            if value is None:
                continue
            u = min(max((fixed.data[y, x] - stats_v.min) / stats_v.bin_width, 0.0), bins - 1)
            kappa = math.ceil(u - 0.5)
            v = min(max((value - stats_t.min) / stats_t.bin_width, 1.0), bins - 2.0)
            for iota in range(bins):
                joint[iota, kappa] += beta3(iota - v)
    return joint / joint.sum()


def make_joint(joint):
    joint = np.asarray(joint, dtype=np.float64)
    return JointHistogram(
        bin_count=joint.shape[0],
        joint=joint,
        marginal_t=mimetric.marginal_t(joint),
        marginal_v=mimetric.marginal_v(joint),
        contributing_samples=1,
    )


def build(fixed, moving, m, bins=8, **kwargs):
    cfg = MetricConfig(bin_count=bins, **kwargs)
    return mimetric.build_joint(
        fixed, prefilter(moving), m, cfg,
        intensity_stats(fixed, bins), intensity_stats(moving, bins)
    )


@pytest.fixture
def random_cases(rng):
    """(fixed, moving, matrix) triples on small images with modest transforms."""
    cases = []
    for _ in range(100):
        size = int(rng.integers(8, 17))
        fixed = Raster(rng.uniform(0, 255, (size, size)))
        moving = Raster(rng.uniform(0, 255, (size, size)) * 0.5 + fixed.data * 0.5)
        params = TransformParams.similarity(
            q=rng.uniform(-0.1, 0.1), s=rng.uniform(0.95, 1.05),
            tx=rng.uniform(-1.5, 1.5), ty=rng.uniform(-1.5, 1.5),
        )
        cases.append((fixed, moving, to_matrix(params, image_center(fixed))))
    return cases


class TestBuildJoint:
    def test_normalized_with_consistent_marginals(self, random_cases):
        for fixed, moving, m in random_cases:
            j = build(fixed, moving, m)
            assert j.joint.sum() == pytest.approx(1.0, abs=1e-9)
            assert (j.joint >= 0).all()
            np.testing.assert_allclose(j.marginal_t, j.joint.sum(axis=1), atol=1e-12)
            np.testing.assert_allclose(j.marginal_v, j.joint.sum(axis=0), atol=1e-12)

    def test_matches_brute_force(self, random_cases):
        for fixed, moving, m in random_cases[:20]:
            np.testing.assert_allclose(
                build(fixed, moving, m).joint, brute_force_joint(fixed, moving, m, 8), atol=1e-12
            )

    def test_two_valued_image(self):
        data = np.zeros((16, 16))
        data[:, 8:] = 255.0
        r = Raster(data)
        j = build(r, r, TransformMatrix.identity())
        # half the mass in visual bin 0, half in the last visual bin
        assert j.marginal_v[0] == pytest.approx(0.5)
        assert j.marginal_v[7] == pytest.approx(0.5)
        # thermal spread of the dark half: beta3 taps around the clamped coordinate 1
        np.testing.assert_allclose(j.joint[:4, 0], [1 / 12, 1 / 3, 1 / 12, 0.0], atol=1e-9)
        np.testing.assert_allclose(j.joint[4:, 7], [0.0, 1 / 12, 1 / 3, 1 / 12], atol=1e-9)
        np.testing.assert_allclose(
            j.joint, brute_force_joint(r, r, TransformMatrix.identity(), 8), atol=1e-12
        )

    def test_constant_images(self):
        r = Raster(np.full((12, 12), 9.0))
        j = build(r, r, TransformMatrix.identity())
        assert j.joint[:, 0].sum() == pytest.approx(1.0)
        assert j.joint[:, 1:].sum() == 0.0

    def test_no_overlap(self, scene):
        m = to_matrix(TransformParams.similarity(tx=500.0))
        with pytest.raises(InsufficientOverlapError):
            build(scene, scene, m)

    def test_partial_overlap_below_minimum(self, scene):
        m = to_matrix(TransformParams.similarity(tx=80.0))
        with pytest.raises(InsufficientOverlapError):
            build(scene, scene, m, min_valid_fraction=0.25)

    def test_sample_counts(self, scene):
        j = build(scene, scene, TransformMatrix.identity(), sampling_fraction=0.5)
        assert j.selected_samples == round(0.5 * scene.width * scene.height)
        assert j.contributing_samples == j.selected_samples


class TestMarginals:
    def test_single_cell(self):
        joint = np.zeros((8, 8))
        joint[3, 5] = 1.0
        np.testing.assert_array_equal(mimetric.marginal_t(joint), np.eye(8)[3])
        np.testing.assert_array_equal(mimetric.marginal_v(joint), np.eye(8)[5])

    def test_random_joint(self, rng):
        joint = rng.uniform(size=(8, 8))
        joint /= joint.sum()
        assert mimetric.marginal_t(joint).sum() == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(
            mimetric.marginal_t(joint), [sum(row) for row in joint], atol=1e-12
        )


class TestMutualInformation:
    def test_independent_is_zero(self, rng):
        a = rng.uniform(size=8)
        b = rng.uniform(size=8)
        j = make_joint(np.outer(a / a.sum(), b / b.sum()))
        assert mimetric.mutual_information(j) == pytest.approx(0.0, abs=1e-12)

    def test_bounds(self, random_cases):
        for fixed, moving, m in random_cases:
            j = build(fixed, moving, m)
            mi = mimetric.mutual_information(j)
            bound = min(mimetric.entropy(j.marginal_t), mimetric.entropy(j.marginal_v))
            assert 0.0 <= mi <= bound + 1e-9
            assert mimetric.mi_cost(j) <= 0.0

    def test_entropy_identity(self, scene):
        j = build(scene, scene, TransformMatrix.identity(), bins=32)
        expected = (mimetric.entropy(j.marginal_t) + mimetric.entropy(j.marginal_v)
                    - mimetric.entropy(j.joint))
        assert mimetric.mi_cost(j) == pytest.approx(-expected, abs=1e-12)

    def test_constant_vs_random(self, rng):
        fixed = Raster(rng.uniform(0, 255, (16, 16)))
        moving = Raster(np.full((16, 16), 100.0))
        assert mimetric.mutual_information(build(fixed, moving, TransformMatrix.identity())) < 1e-9

    def test_single_visual_bin_is_exactly_zero(self, rng):
        joint = np.zeros((8, 8))
        joint[:, 3] = rng.uniform(size=8)
        joint /= joint.sum()
        j = make_joint(joint)
        assert mimetric.mutual_information(j) == 0.0
        assert mimetric.mi_cost(j) == 0.0


class TestEvaluate:
    def cost(self, scene, params, **kwargs):
        cfg = MetricConfig(**kwargs)
        return mimetric.evaluate(
            scene, prefilter(scene), params, cfg,
            mimetric.intensity_stats_for(scene, cfg), mimetric.intensity_stats_for(scene, cfg)
        )

    def test_identity_beats_offsets(self, scene):
        at_identity = self.cost(scene, TransformParams.identity())
        assert at_identity < self.cost(scene, TransformParams.similarity(tx=5.0, ty=5.0))
        for params in (
            TransformParams.similarity(tx=5.0), TransformParams.similarity(tx=-5.0),
            TransformParams.similarity(ty=5.0), TransformParams.similarity(ty=-5.0),
            TransformParams.similarity(q=math.radians(5)), TransformParams.similarity(q=math.radians(-5)),
        ):
            assert at_identity < self.cost(scene, params)

    def test_deterministic(self, scene):
        params = TransformParams.similarity(q=0.02, tx=1.3)
        first = self.cost(scene, params, sampling_fraction=0.3, sample_seed=7)
        second = self.cost(scene, params, sampling_fraction=0.3, sample_seed=7)
        assert first == second

    def test_constant_fixed_image(self, scene):
        fixed = Raster(np.full(scene.shape, 50.0))
        cfg = MetricConfig()
        cost = mimetric.evaluate(
            fixed, prefilter(scene), TransformParams.identity(), cfg,
            mimetric.intensity_stats_for(fixed, cfg), mimetric.intensity_stats_for(scene, cfg)
        )
        assert cost == 0.0
