"""Filling of deoccluded (invalid) pixels left behind by forward warping.

Both strategies only ever copy colors from pixels that were valid in the
input; nothing is blended or synthesized, so textures continue into the
holes without blurring.
"""
from __future__ import annotations

import numpy as np

from .imagecore import Image, MaskedImage


class AllInvalidError(ValueError):
    """Raised when a frame contains no valid pixel to sample from."""


def inpaint_reflect(buf: MaskedImage) -> Image:
    """Fill each horizontal run of invalid pixels by mirroring adjacent texture.

    For a run with valid pixels on both sides the side with the longer
    adjacent valid span is mirrored into the hole (ties go left). The k-th
    hole pixel counted from the chosen valid neighbor takes the color k-1
    steps back into the valid span, bouncing at the span ends when the hole
    is longer than the span. Rows that are entirely invalid fall back to the
    nearest valid pixel in column-major scan order over the whole image.
    """
    valid = buf.valid
    if not valid.any():
        raise AllInvalidError("cannot in-paint a frame with no valid pixels")
    if valid.all():
        return buf.image

    out = buf.image.pixels.copy()
    height, width = valid.shape
    row_has_valid = valid.any(axis=1)

    for y in np.nonzero(row_has_valid)[0]:
        rowmask = valid[y]
        if rowmask.all():
            continue
        padded = np.concatenate(([False], ~rowmask, [False]))
        edges = np.diff(padded.astype(np.int8))
        starts = np.nonzero(edges == 1)[0]
        ends = np.nonzero(edges == -1)[0]  # exclusive
        row = out[y]
        for i, (a, e) in enumerate(zip(starts, ends)):
            left_span = a - (ends[i - 1] if i > 0 else 0)
            right_span = (starts[i + 1] if i + 1 < len(starts) else width) - e
            run = e - a
            k = np.arange(1, run + 1)
            if left_span > 0 and (right_span == 0 or left_span >= right_span):
                span, anchor, step = left_span, a - 1, 1
            else:
                span, anchor, step = right_span, e, -1
            bounce = (k - 1) % (2 * span)
            depth_in = np.where(bounce < span, bounce, 2 * span - 1 - bounce)
            src_cols = anchor - step * depth_in
            dst_cols = anchor + step * k
            row[dst_cols] = row[src_cols]

    empty_rows = np.nonzero(~row_has_valid)[0]
    if empty_rows.size:
        _fill_column_major_nearest(out, valid, empty_rows)
    return Image(out)


def _fill_column_major_nearest(out: np.ndarray, valid: np.ndarray, rows: np.ndarray):
    """Fill whole rows from the nearest valid pixel in column-major order."""
    height, width = valid.shape
    vy, vx = np.nonzero(valid)
    valid_idx = np.sort(vx.astype(np.int64) * height + vy)
    cols = np.arange(width, dtype=np.int64)
    target_idx = (cols[None, :] * height + rows[:, None]).ravel()
    pos = np.searchsorted(valid_idx, target_idx)
    lo = np.clip(pos - 1, 0, valid_idx.size - 1)
    hi = np.clip(pos, 0, valid_idx.size - 1)
    d_lo = np.abs(target_idx - valid_idx[lo])
    d_hi = np.abs(valid_idx[hi] - target_idx)
    chosen = np.where(d_lo <= d_hi, valid_idx[lo], valid_idx[hi])  # tie: earlier pixel
    src_y = (chosen % height).astype(np.intp)
    src_x = (chosen // height).astype(np.intp)
    tgt_y = np.repeat(rows, width)
    tgt_x = np.tile(cols, rows.size)
    out[tgt_y, tgt_x] = out[src_y, src_x]


def inpaint_nearest(buf: MaskedImage) -> Image:
    """Fill each invalid pixel with the nearest valid pixel in its row.

    Column distance decides, ties go left. Rows without any valid pixel
    copy the same column from the nearest row that had one (ties go up).
    """
    valid = buf.valid
    if not valid.any():
        raise AllInvalidError("cannot in-paint a frame with no valid pixels")
    if valid.all():
        return buf.image

    px = buf.image.pixels
    height, width = valid.shape
    xs = np.arange(width)

    left = np.where(valid, xs[None, :], -1)
    left = np.maximum.accumulate(left, axis=1)
    right = np.where(valid, xs[None, :], width)
    right = np.minimum.accumulate(right[:, ::-1], axis=1)[:, ::-1]

    dist_left = np.where(left >= 0, xs[None, :] - left, np.iinfo(np.int64).max)
    dist_right = np.where(right < width, right - xs[None, :], np.iinfo(np.int64).max)
    src_col = np.where(dist_left <= dist_right, left, right)

    row_has_valid = valid.any(axis=1)
    gather_col = np.clip(src_col, 0, width - 1)
    filled = px[np.arange(height)[:, None], gather_col]
    out = np.where((valid | ~row_has_valid[:, None])[:, :, None], px, filled)

    empty_rows = np.nonzero(~row_has_valid)[0]
    if empty_rows.size:
        nonempty = np.nonzero(row_has_valid)[0]
        pos = np.searchsorted(nonempty, empty_rows)
        lo = np.clip(pos - 1, 0, nonempty.size - 1)
        hi = np.clip(pos, 0, nonempty.size - 1)
        d_lo = np.abs(empty_rows - nonempty[lo])
        d_hi = np.abs(nonempty[hi] - empty_rows)
        src_row = np.where(d_lo <= d_hi, nonempty[lo], nonempty[hi])  # tie: upper row
        out[empty_rows] = out[src_row]
    return Image(out)


STRATEGIES = {
    "reflect": inpaint_reflect,
    "nearest": inpaint_nearest,
}
