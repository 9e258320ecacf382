"""Deterministic synthetic stereo scenes with ground-truth disparity.

Scenes are built from horizontal layers: a zero-disparity background plus
foreground patches that shift between the two views by an integer pixel
count. Layer textures move with the layer, so corresponding scene points
have identical colors in both views. Nearer layers use negative
left-to-right shifts, which makes them win the depth test (smaller
disparity is preferred) exactly like real near geometry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import Direction, DisparityMap, Image


@dataclass(frozen=True)
class StereoScene:
    """A rectified stereo pair with both disparity maps."""

    name: str
    left: Image
    right: Image
    disp_left: DisparityMap
    disp_right: DisparityMap

    @property
    def width(self) -> int:
        return self.left.width

    @property
    def height(self) -> int:
        return self.left.height


@dataclass(frozen=True)
class Layer:
    """A textured patch at a fixed horizontal shift between the views."""

    texture: np.ndarray  # (H, W, 3)
    mask: np.ndarray  # (H, W) bool, left-view footprint
    shift: int  # columns moved from left view to right view


def compose(name: str, background: np.ndarray, layers: list[Layer]) -> StereoScene:
    """Paint layers far-to-near over the background in both views."""
    height, width, _ = background.shape
    left = background.copy()
    right = background.copy()
    d_left = np.zeros((height, width))
    d_right = np.zeros((height, width))

    for layer in layers:
        left[layer.mask] = layer.texture[layer.mask]
        d_left[layer.mask] = layer.shift
        mask_r, tex_r = _shifted(layer.mask, layer.texture, layer.shift)
        right[mask_r] = tex_r[mask_r]
        d_right[mask_r] = -layer.shift

    return StereoScene(
        name=name,
        left=Image(np.clip(left, 0.0, 1.0)),
        right=Image(np.clip(right, 0.0, 1.0)),
        disp_left=DisparityMap(d_left, Direction.LEFT_TO_RIGHT),
        disp_right=DisparityMap(d_right, Direction.RIGHT_TO_LEFT),
    )


def _shifted(mask: np.ndarray, texture: np.ndarray, shift: int):
    """Move a mask/texture pair horizontally, dropping columns that leave."""
    mask_out = np.zeros_like(mask)
    tex_out = np.zeros_like(texture)
    width = mask.shape[1]
    if shift >= 0:
        mask_out[:, shift:] = mask[:, : width - shift]
        tex_out[:, shift:] = texture[:, : width - shift]
    else:
        mask_out[:, :shift] = mask[:, -shift:]
        tex_out[:, :shift] = texture[:, -shift:]
    return mask_out, tex_out


def _gradient(width: int, height: int, rng: np.random.Generator) -> np.ndarray:
    xs = np.linspace(0.0, 1.0, width)[None, :]
    ys = np.linspace(0.0, 1.0, height)[:, None]
    coeffs = rng.uniform(0.2, 0.8, size=(3, 2))
    base = rng.uniform(0.05, 0.25, size=3)
    tex = np.empty((height, width, 3))
    for c in range(3):
        tex[:, :, c] = base[c] + coeffs[c, 0] * xs + coeffs[c, 1] * ys
    tex += rng.normal(0.0, 0.02, size=tex.shape)
    return np.clip(tex, 0.0, 1.0)


def _stripes(width: int, height: int, rng: np.random.Generator) -> np.ndarray:
    xs = np.arange(width)[None, :]
    ys = np.arange(height)[:, None]
    freq = rng.uniform(0.15, 0.4)
    phase = rng.uniform(0.0, np.pi, size=3)
    tex = np.empty((height, width, 3))
    for c in range(3):
        tex[:, :, c] = 0.5 + 0.35 * np.sin(freq * xs + 0.07 * ys + phase[c])
    tex += rng.normal(0.0, 0.02, size=tex.shape)
    return np.clip(tex, 0.0, 1.0)


def _blobs(width: int, height: int, rng: np.random.Generator, count: int = 6) -> np.ndarray:
    xs = np.arange(width)[None, :]
    ys = np.arange(height)[:, None]
    tex = np.full((height, width, 3), rng.uniform(0.1, 0.3, size=3))
    for _ in range(count):
        cx = rng.uniform(0, width)
        cy = rng.uniform(0, height)
        sigma = rng.uniform(0.08, 0.2) * min(width, height)
        bump = np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * sigma**2))
        color = rng.uniform(0.3, 0.9, size=3)
        tex += bump[:, :, None] * color[None, None, :]
    tex += rng.normal(0.0, 0.02, size=tex.shape)
    return np.clip(tex, 0.0, 1.0)


def _rect_mask(width: int, height: int, x0: float, y0: float, w: float, h: float) -> np.ndarray:
    mask = np.zeros((height, width), dtype=bool)
    mask[
        int(y0 * height) : int((y0 + h) * height),
        int(x0 * width) : int((x0 + w) * width),
    ] = True
    return mask


def two_layer(
    width: int = 192,
    height: int = 128,
    fg_shift: int = -4,
    seed: int = 7,
) -> StereoScene:
    """The standard test scene: one foreground rectangle over a textured field."""
    rng = np.random.default_rng(seed)
    background = _gradient(width, height, rng)
    fg = Layer(
        texture=_stripes(width, height, rng),
        mask=_rect_mask(width, height, 0.35, 0.25, 0.3, 0.45),
        shift=fg_shift,
    )
    return compose("two_layer", background, [fg])


def scene_suite(width: int = 160, height: int = 120) -> list[StereoScene]:
    """Three structurally different scenes for consistency comparisons."""
    scenes = []

    rng = np.random.default_rng(11)
    bg = _gradient(width, height, rng)
    near = Layer(_stripes(width, height, rng), _rect_mask(width, height, 0.15, 0.2, 0.3, 0.5), -6)
    far = Layer(_blobs(width, height, rng), _rect_mask(width, height, 0.55, 0.35, 0.3, 0.4), -3)
    scenes.append(compose("blocks", bg, [far, near]))

    rng = np.random.default_rng(23)
    bg = _blobs(width, height, rng)
    bar = Layer(_gradient(width, height, rng), _rect_mask(width, height, 0.3, 0.1, 0.25, 0.8), -5)
    scenes.append(compose("bar_over_blobs", bg, [bar]))

    rng = np.random.default_rng(41)
    bg = _stripes(width, height, rng)
    blob_layer = Layer(_blobs(width, height, rng), _rect_mask(width, height, 0.4, 0.3, 0.35, 0.45), -4)
    side = Layer(_gradient(width, height, rng), _rect_mask(width, height, 0.05, 0.55, 0.2, 0.35), -7)
    scenes.append(compose("blobs_over_stripes", bg, [blob_layer, side]))

    return scenes
