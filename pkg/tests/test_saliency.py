import numpy as np
import pytest

from attentive_teleop.saliency import (SaliencyImage, SaliencyParams,
                                       depth_saliency, fuse_saliency,
                                       image_saliency)


class TestParams:
    def test_rejects_insufficient_pyramid(self):
        with pytest.raises(ValueError, match="pyramid_levels"):
            SaliencyParams(pyramid_levels=5)

    def test_rejects_zero_fusion_weights(self):
        with pytest.raises(ValueError):
            SaliencyParams(k_image=0.0, k_depth=0.0)


class TestImageSaliency:
    def test_uniform_image_is_zero(self):
        img = np.full((120, 160, 3), 128, dtype=np.uint8)
        out = image_saliency(img)
        assert float(out.scores.max()) == 0.0

    def test_uniform_nonuniform_gray_levels(self):
        for level in (0, 37, 255):
            img = np.full((120, 160, 3), level, dtype=np.uint8)
            assert float(image_saliency(img).scores.max()) == 0.0

    def test_bright_patch_argmax_near_center(self):
        img = np.full((120, 160, 3), 30, dtype=np.uint8)
        img[78:83, 58:63] = 255  # 5x5 patch centered at (80, 60)
        out = image_saliency(img)
        v, u = np.unravel_index(np.argmax(out.scores), out.scores.shape)
        assert abs(u - 60) <= 2 and abs(v - 80) <= 2

    def test_output_range_and_shape(self):
        rng = np.random.default_rng(6)
        img = rng.integers(0, 256, size=(120, 160, 3), dtype=np.uint8)
        out = image_saliency(img)
        assert out.scores.shape == (120, 160)
        assert 0.0 <= float(out.scores.min())
        assert float(out.scores.max()) == pytest.approx(255.0)

    def test_mirror_equivariance(self):
        """Left-right mirroring the input mirrors the saliency map (within
        resampling tolerance on the 0-255 scale)."""
        rng = np.random.default_rng(7)
        img = np.full((120, 160, 3), 40, dtype=np.uint8)
        for _ in range(6):  # a few colored blocks
            y, x = rng.integers(10, 100), rng.integers(10, 140)
            img[y:y + 8, x:x + 8] = rng.integers(0, 256, size=3)
        a = image_saliency(img).scores
        b = image_saliency(img[:, ::-1]).scores[:, ::-1]
        assert float(np.abs(a - b).max()) <= 1.0

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        img = rng.integers(0, 256, size=(120, 160, 3), dtype=np.uint8)
        assert np.array_equal(image_saliency(img).scores,
                              image_saliency(img).scores)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            image_saliency(np.zeros((0, 0, 3), dtype=np.uint8))


class TestDepthSaliency:
    def test_matches_reference_formula(self):
        """Oracle: independent elementwise evaluation including the
        round-half-up quantization."""
        rng = np.random.default_rng(9)
        z_near, z_far = 0.3, 10.0
        depth = rng.uniform(z_near, z_far, size=(50, 60))
        out = depth_saliency(depth, z_near, z_far)
        import math
        for v, u in zip(rng.integers(0, 50, 300), rng.integers(0, 60, 300)):
            z = depth[v, u]
            expected = math.floor(
                255.0 * (z_near / z) * (z_far - z) / (z_far - z_near) + 0.5)
            assert out.scores[v, u] == expected

    def test_extremes(self):
        z_near, z_far = 0.5, 10.0
        depth = np.array([[z_near, z_far]])
        out = depth_saliency(depth, z_near, z_far)
        assert out.scores[0, 0] == 255.0
        assert out.scores[0, 1] == 0.0

    def test_monotone_decreasing_in_depth(self):
        depth = np.linspace(0.3, 10.0, 500)[None, :]
        s = depth_saliency(depth, 0.3, 10.0).scores[0]
        assert np.all(np.diff(s) <= 0)

    def test_clamps_below_near_plane(self):
        out = depth_saliency(np.array([[0.01]]), 0.3, 10.0)
        assert out.scores[0, 0] == 255.0

    def test_rejects_bad_planes(self):
        with pytest.raises(ValueError):
            depth_saliency(np.ones((2, 2)), 5.0, 1.0)


class TestFusion:
    def test_linear_combination(self):
        a = SaliencyImage(scores=np.full((4, 4), 100.0))
        b = SaliencyImage(scores=np.full((4, 4), 200.0))
        fused = fuse_saliency(a, b, 0.5, 0.5)
        assert np.all(fused.scores == 150.0)

    def test_clamped_to_range(self):
        a = SaliencyImage(scores=np.full((4, 4), 255.0))
        b = SaliencyImage(scores=np.full((4, 4), 255.0))
        fused = fuse_saliency(a, b, 1.0, 1.0)
        assert np.all(fused.scores == 255.0)

    def test_dimension_mismatch_raises(self):
        a = SaliencyImage(scores=np.zeros((4, 4)))
        b = SaliencyImage(scores=np.zeros((4, 5)))
        with pytest.raises(ValueError, match="dimensions"):
            fuse_saliency(a, b, 0.5, 0.5)
