"""Disparity-driven forward warping with a depth test, and blended synthesis.

Warping is horizontal-only (rectified inputs): a source pixel at column x
lands at column round(x + d), same row, rounding half away from zero.
Colliding pixels are resolved by a depth test that keeps the pixel with
the smaller disparity value; among equal disparities the larger source
column wins. `depth_order="larger"` flips the preference for data whose
sign convention runs the other way.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .imagecore import (
    Direction,
    DisparityMap,
    Image,
    MaskedImage,
    Viewpoint,
)

Inpainter = Callable[[MaskedImage], Image]

DEPTH_ORDERS = ("smaller", "larger")


@dataclass(frozen=True)
class WarpBuffer:
    """Forward-warp output: colors, validity, and the winning source disparity.

    Where `color.valid` is False the color is unspecified and the depth
    holds the +inf sentinel.
    """

    color: MaskedImage
    depth: np.ndarray


def scale_disparity(d: DisparityMap, src: Viewpoint, dst: Viewpoint) -> DisparityMap:
    """Rescale a stored stereo-baseline disparity map for a warp src -> dst.

    A LeftToRight map scales by (dst - src) and a RightToLeft map by
    (src - dst), so warping to the opposite stereo endpoint reproduces the
    stored map and warping in place zeroes it.
    """
    if d.direction is Direction.LEFT_TO_RIGHT:
        t = dst.position - src.position
    else:
        t = src.position - dst.position
    return DisparityMap(d.values * t, d.direction)


@njit(cache=True, nogil=True)
def _warp_kernel(src, disp, smaller_wins):
    h, w, _ = src.shape
    color = np.zeros((h, w, 3), np.float64)
    depth = np.zeros((h, w), np.float64)
    valid = np.zeros((h, w), np.bool_)
    for y in range(h):
        for x in range(w):
            d = disp[y, x]
            v = x + d
            if v >= 0.0:
                tx = int(math.floor(v + 0.5))
            else:
                tx = int(math.ceil(v - 0.5))
            if tx < 0 or tx >= w:
                continue
            if valid[y, tx]:
                if smaller_wins:
                    take = d <= depth[y, tx]
                else:
                    take = d >= depth[y, tx]
            else:
                take = True
            if take:
                valid[y, tx] = True
                depth[y, tx] = d
                color[y, tx, 0] = src[y, x, 0]
                color[y, tx, 1] = src[y, x, 1]
                color[y, tx, 2] = src[y, x, 2]
    return color, depth, valid


def forward_warp(src: Image, d: DisparityMap, depth_order: str = "smaller") -> WarpBuffer:
    """Splat every source pixel to its disparity-shifted column.

    The disparity map must already be scaled to the target viewpoint.
    Out-of-bounds targets are dropped; targets that receive nothing are
    marked invalid.
    """
    if (src.height, src.width) != (d.height, d.width):
        raise ValueError(
            f"image ({src.height}, {src.width}) and disparity "
            f"({d.height}, {d.width}) dimensions differ"
        )
    if depth_order not in DEPTH_ORDERS:
        raise ValueError(f"depth_order must be one of {DEPTH_ORDERS}, got {depth_order!r}")
    color, depth, valid = _warp_kernel(src.pixels, d.values, depth_order == "smaller")
    depth[~valid] = np.inf
    return WarpBuffer(color=MaskedImage(Image(color), valid), depth=depth)


def blend_alpha(b: Viewpoint) -> float:
    """Proximity blend weight of the right view: 0 left of the baseline,
    1 right of it, linear in between."""
    pos = b.position
    if pos < 0.0:
        return 0.0
    if pos > 1.0:
        return 1.0
    return pos


def synthesize_one(
    src: Image,
    d: DisparityMap,
    src_vp: Viewpoint,
    dst_vp: Viewpoint,
    inpainter: Inpainter,
    depth_order: str = "smaller",
) -> Image:
    """Re-project a single view to a new viewpoint and fill deocclusions."""
    scaled = scale_disparity(d, src_vp, dst_vp)
    buf = forward_warp(src, scaled, depth_order)
    if buf.color.valid.all():
        return buf.color.image
    return inpainter(buf.color)


def synthesize_blend(
    left: Image,
    right: Image,
    d_left: DisparityMap,
    d_right: DisparityMap,
    dst_vp: Viewpoint,
    inpainter: Inpainter,
    depth_order: str = "smaller",
) -> Image:
    """Warp both stereo views to a target viewpoint and blend by proximity.

    Per target pixel: both warps valid -> (1 - alpha) * left + alpha * right
    with alpha = blend_alpha(dst_vp); exactly one valid -> take it; neither
    valid -> left for the in-painter.
    """
    shapes = {
        (left.height, left.width),
        (right.height, right.width),
        (d_left.height, d_left.width),
        (d_right.height, d_right.width),
    }
    if len(shapes) != 1:
        raise ValueError(f"input dimensions differ: {sorted(shapes)}")
    if d_left.direction is not Direction.LEFT_TO_RIGHT:
        raise ValueError("left disparity must be tagged LEFT_TO_RIGHT")
    if d_right.direction is not Direction.RIGHT_TO_LEFT:
        raise ValueError("right disparity must be tagged RIGHT_TO_LEFT")

    from_left = forward_warp(left, scale_disparity(d_left, Viewpoint(0.0), dst_vp), depth_order)
    from_right = forward_warp(right, scale_disparity(d_right, Viewpoint(1.0), dst_vp), depth_order)
    alpha = blend_alpha(dst_vp)

    lv = from_left.color.valid
    rv = from_right.color.valid
    lp = from_left.color.image.pixels
    rp = from_right.color.image.pixels

    blended = (1.0 - alpha) * lp + alpha * rp
    out = np.where(
        (lv & rv)[:, :, None],
        blended,
        np.where(lv[:, :, None], lp, rp),
    )
    valid = lv | rv
    merged = MaskedImage(Image(np.clip(out, 0.0, 1.0)), valid)
    if valid.all():
        return merged.image
    return inpainter(merged)
