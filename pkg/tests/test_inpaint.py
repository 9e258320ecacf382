"""Hole-filling tests against hand-worked cases and brute-force oracles."""
import numpy as np
import pytest

from mvstyle.imagecore import Image, MaskedImage
from mvstyle.inpaint import AllInvalidError, inpaint_nearest, inpaint_reflect

from oracles import nearest_inpaint_oracle, reflect_inpaint_oracle

A = (0.9, 0.1, 0.1)
B = (0.1, 0.9, 0.1)
C = (0.1, 0.1, 0.9)
D = (0.9, 0.9, 0.1)


def _masked_row(colors, validity):
    px = np.array([colors], dtype=np.float64)
    mask = np.array([validity], dtype=bool)
    return MaskedImage(Image(px), mask)


def _random_case(rng, h=None, w=None, p_valid=0.6):
    h = h or int(rng.integers(1, 10))
    w = w or int(rng.integers(1, 14))
    px = rng.random((h, w, 3))
    mask = rng.random((h, w)) < p_valid
    if not mask.any():
        mask[rng.integers(0, h), rng.integers(0, w)] = True
    return MaskedImage(Image(px), mask)


class TestReflect:
    def test_identity_when_fully_valid(self):
        buf = _masked_row([A, B, C], [True, True, True])
        out = inpaint_reflect(buf)
        assert np.array_equal(out.pixels, buf.image.pixels)

    def test_hand_worked_interior_hole(self):
        # [A, B, C, ., ., D]: left span (3) beats right span (1), so the
        # hole mirrors [C, B] off the left edge.
        buf = _masked_row([A, B, C, (0, 0, 0), (0, 0, 0), D], [1, 1, 1, 0, 0, 1])
        out = inpaint_reflect(buf)
        expected = np.array([[A, B, C, C, B, D]], dtype=np.float64)
        assert np.array_equal(out.pixels, expected)

    def test_right_span_longer(self):
        # [A, ., ., B, C, D]: right span (3) beats left span (1).
        buf = _masked_row([A, (0, 0, 0), (0, 0, 0), B, C, D], [1, 0, 0, 1, 1, 1])
        out = inpaint_reflect(buf)
        expected = np.array([[A, C, B, B, C, D]], dtype=np.float64)
        assert np.array_equal(out.pixels, expected)

    def test_tie_breaks_left(self):
        buf = _masked_row([A, (0, 0, 0), B], [1, 0, 1])
        out = inpaint_reflect(buf)
        assert tuple(out.pixels[0, 1]) == A

    def test_hole_touching_left_border(self):
        # [., ., A, B] reflects off the only valid side.
        buf = _masked_row([(0, 0, 0), (0, 0, 0), A, B], [0, 0, 1, 1])
        out = inpaint_reflect(buf)
        expected = np.array([[B, A, A, B]], dtype=np.float64)
        assert np.array_equal(out.pixels, expected)

    def test_hole_longer_than_span_bounces(self):
        # Span [A, B] extended five columns: B A A B B.
        colors = [A, B] + [(0, 0, 0)] * 5
        buf = _masked_row(colors, [1, 1, 0, 0, 0, 0, 0])
        out = inpaint_reflect(buf)
        expected = np.array([[A, B, B, A, A, B, B]], dtype=np.float64)
        assert np.array_equal(out.pixels, expected)

    def test_fully_invalid_row_uses_column_major_nearest(self):
        px = np.zeros((2, 3, 3))
        px[0, 0], px[0, 1], px[0, 2] = A, B, C
        mask = np.array([[True, True, True], [False, False, False]])
        out = inpaint_reflect(MaskedImage(Image(px), mask))
        # In column-major order each bottom pixel's nearest valid neighbor
        # is the pixel directly above it.
        assert np.array_equal(out.pixels[1], np.array([A, B, C]))

    def test_all_invalid_raises(self):
        buf = _masked_row([A, B], [False, False])
        with pytest.raises(AllInvalidError):
            inpaint_reflect(buf)

    def test_matches_oracle_on_random_masks(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            buf = _random_case(rng)
            out = inpaint_reflect(buf)
            expected = reflect_inpaint_oracle(buf.image.pixels, buf.valid)
            np.testing.assert_array_equal(out.pixels, expected)

    def test_sparse_masks_with_empty_rows(self):
        rng = np.random.default_rng(33)
        for _ in range(15):
            buf = _random_case(rng, h=6, w=8, p_valid=0.15)
            out = inpaint_reflect(buf)
            expected = reflect_inpaint_oracle(buf.image.pixels, buf.valid)
            np.testing.assert_array_equal(out.pixels, expected)


class TestNearest:
    def test_identity_when_fully_valid(self):
        buf = _masked_row([A, B], [True, True])
        out = inpaint_nearest(buf)
        assert np.array_equal(out.pixels, buf.image.pixels)

    def test_hand_worked_row(self):
        # [A, ., ., B] -> [A, A, B, B]; the exact midpoint ties to the left.
        buf = _masked_row([A, (0, 0, 0), (0, 0, 0), B], [1, 0, 0, 1])
        out = inpaint_nearest(buf)
        expected = np.array([[A, A, B, B]], dtype=np.float64)
        assert np.array_equal(out.pixels, expected)

    def test_tie_goes_left(self):
        buf = _masked_row([A, (0, 0, 0), B], [1, 0, 1])
        out = inpaint_nearest(buf)
        assert tuple(out.pixels[0, 1]) == A

    def test_empty_row_copies_nearest_filled_row(self):
        px = np.zeros((3, 2, 3))
        px[0, 0], px[0, 1] = A, B
        px[2, 0], px[2, 1] = C, D
        mask = np.array([[1, 1], [0, 0], [1, 1]], dtype=bool)
        out = inpaint_nearest(MaskedImage(Image(px), mask))
        # Row 1 ties between rows 0 and 2; the upper row wins.
        assert np.array_equal(out.pixels[1], np.array([A, B]))

    def test_all_invalid_raises(self):
        buf = _masked_row([A], [False])
        with pytest.raises(AllInvalidError):
            inpaint_nearest(buf)

    def test_matches_oracle_on_random_masks(self):
        rng = np.random.default_rng(37)
        for _ in range(40):
            buf = _random_case(rng)
            out = inpaint_nearest(buf)
            expected = nearest_inpaint_oracle(buf.image.pixels, buf.valid)
            np.testing.assert_array_equal(out.pixels, expected)

    def test_sparse_masks_with_empty_rows(self):
        rng = np.random.default_rng(39)
        for _ in range(15):
            buf = _random_case(rng, h=7, w=5, p_valid=0.12)
            out = inpaint_nearest(buf)
            expected = nearest_inpaint_oracle(buf.image.pixels, buf.valid)
            np.testing.assert_array_equal(out.pixels, expected)


@pytest.mark.parametrize("fill", [inpaint_reflect, inpaint_nearest])
class TestSharedProperties:
    def test_valid_pixels_untouched(self, fill):
        rng = np.random.default_rng(41)
        for _ in range(20):
            buf = _random_case(rng)
            out = fill(buf)
            np.testing.assert_array_equal(
                out.pixels[buf.valid], buf.image.pixels[buf.valid]
            )

    def test_no_invented_colors(self, fill):
        rng = np.random.default_rng(43)
        for _ in range(20):
            buf = _random_case(rng)
            out = fill(buf)
            valid_colors = {tuple(c) for c in buf.image.pixels[buf.valid]}
            for color in out.pixels[~buf.valid]:
                assert tuple(color) in valid_colors

    def test_output_in_range(self, fill):
        rng = np.random.default_rng(47)
        buf = _random_case(rng, h=6, w=9)
        out = fill(buf)
        assert np.isfinite(out.pixels).all()
        assert out.pixels.min() >= 0.0 and out.pixels.max() <= 1.0

    def test_deterministic(self, fill):
        rng = np.random.default_rng(53)
        buf = _random_case(rng, h=8, w=11, p_valid=0.4)
        first = fill(buf)
        second = fill(buf)
        assert first.pixels.tobytes() == second.pixels.tobytes()
