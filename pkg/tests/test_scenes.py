"""Geometric self-consistency of the synthetic stereo scenes."""
import numpy as np
import pytest

from mvstyle.imagecore import Direction
from mvstyle.scenes import scene_suite, two_layer
from mvstyle.viewsynth import forward_warp, scale_disparity
from mvstyle.imagecore import Viewpoint


@pytest.mark.parametrize("scene", [two_layer(96, 64)] + scene_suite(80, 60),
                         ids=lambda s: s.name)
class TestSceneGeometry:
    def test_shapes_consistent(self, scene):
        assert scene.left.shape == scene.right.shape
        assert (scene.disp_left.height, scene.disp_left.width) == (scene.height, scene.width)
        assert scene.disp_left.direction is Direction.LEFT_TO_RIGHT
        assert scene.disp_right.direction is Direction.RIGHT_TO_LEFT

    def test_left_warp_reproduces_right_view(self, scene):
        # Every pixel the left-to-right warp reaches must match the right
        # view exactly; only deocclusions may differ (they are invalid).
        buf = forward_warp(scene.left, scene.disp_left)
        mask = buf.color.valid
        assert mask.mean() > 0.9
        np.testing.assert_array_equal(
            buf.color.image.pixels[mask], scene.right.pixels[mask]
        )

    def test_right_warp_reproduces_left_view(self, scene):
        # Right-to-left shifts are positive for near layers, so the
        # smaller-wins depth test lets the background bleed through in a
        # band at each occlusion boundary; flipping the preference makes
        # the reconstruction exact. Both behaviors are intentional.
        scaled = scale_disparity(scene.disp_right, Viewpoint(1.0), Viewpoint(0.0))

        buf = forward_warp(scene.right, scaled, depth_order="larger")
        mask = buf.color.valid
        assert mask.mean() > 0.9
        np.testing.assert_array_equal(
            buf.color.image.pixels[mask], scene.left.pixels[mask]
        )

        buf_default = forward_warp(scene.right, scaled)
        mask_default = buf_default.color.valid
        matches = (
            buf_default.color.image.pixels[mask_default]
            == scene.left.pixels[mask_default]
        ).all(axis=1)
        assert matches.mean() > 0.85

    def test_determinism(self, scene):
        again = two_layer(96, 64) if scene.name == "two_layer" else None
        if again is not None:
            assert np.array_equal(again.left.pixels, scene.left.pixels)
