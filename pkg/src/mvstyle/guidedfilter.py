"""Edge-aware guided filtering of stylized views against their clean originals.

Window means are computed with integral images (O(1) per pixel) over
windows clipped to the image bounds, i.e. border means divide by the
actual clipped pixel count instead of inventing padding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import Image

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class FilterParams:
    """Box window half-width (pixels) and variance regularizer."""

    radius: int
    epsilon: float

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 1:
            raise ValueError(f"radius must be an integer >= 1, got {self.radius}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        object.__setattr__(self, "radius", int(self.radius))
        object.__setattr__(self, "epsilon", float(self.epsilon))


def default_params(width: int, height: int) -> FilterParams:
    """Default radius grows gently with resolution; epsilon stays fixed.

    A small window keeps the style texture while still pulling the scene
    edges of the guide back into the stylized image.
    """
    radius = max(4, round(min(width, height) / 64))
    return FilterParams(radius=radius, epsilon=1e-3)


def luminance(img: Image) -> np.ndarray:
    """Rec.601 luma of an RGB image as a single-channel float array."""
    return img.pixels @ LUMA_WEIGHTS


def box_mean(channel: np.ndarray, radius: int) -> np.ndarray:
    """Mean over the (2r+1)^2 window around each pixel, clipped to bounds."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    a = np.asarray(channel, dtype=np.float64)
    h, w = a.shape
    integral = np.zeros((h + 1, w + 1), dtype=np.float64)
    np.cumsum(np.cumsum(a, axis=0), axis=1, out=integral[1:, 1:])

    ys = np.arange(h)
    xs = np.arange(w)
    y0 = np.clip(ys - radius, 0, None)
    y1 = np.minimum(ys + radius, h - 1) + 1
    x0 = np.clip(xs - radius, 0, None)
    x1 = np.minimum(xs + radius, w - 1) + 1

    sums = (
        integral[y1[:, None], x1[None, :]]
        - integral[y0[:, None], x1[None, :]]
        - integral[y1[:, None], x0[None, :]]
        + integral[y0[:, None], x0[None, :]]
    )
    counts = (y1 - y0)[:, None] * (x1 - x0)[None, :]
    return sums / counts


def guided_filter(source: Image, guide: Image, params: FilterParams) -> Image:
    """Filter each source channel as a local linear function of the guide luma.

    Per channel p with guide luma I: a = cov(I, p) / (var(I) + eps) and
    b = mean(p) - a * mean(I) over each window; the output is
    mean(a) * I + mean(b) with the coefficient fields window-averaged,
    then clamped to [0, 1].
    """
    if source.shape != guide.shape:
        raise ValueError(
            f"source {source.shape} and guide {guide.shape} dimensions differ"
        )
    r = params.radius
    eps = params.epsilon
    guide_luma = luminance(guide)
    mean_i = box_mean(guide_luma, r)
    var_i = box_mean(guide_luma * guide_luma, r) - mean_i * mean_i

    out = np.empty_like(source.pixels)
    for c in range(3):
        p = source.pixels[:, :, c]
        mean_p = box_mean(p, r)
        mean_ip = box_mean(guide_luma * p, r)
        a = (mean_ip - mean_i * mean_p) / (var_i + eps)
        b = mean_p - a * mean_i
        out[:, :, c] = box_mean(a, r) * guide_luma + box_mean(b, r)
    return Image(np.clip(out, 0.0, 1.0))


def unsharp_mask(img: Image, amount: float = 0.5, radius: int = 1) -> Image:
    """Sharpen by adding back the high-pass residual of a box blur."""
    px = img.pixels
    out = np.empty_like(px)
    for c in range(3):
        blurred = box_mean(px[:, :, c], radius)
        out[:, :, c] = px[:, :, c] + amount * (px[:, :, c] - blurred)
    return Image(np.clip(out, 0.0, 1.0))
