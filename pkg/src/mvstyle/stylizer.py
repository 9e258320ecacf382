"""Pluggable single-image stylization.

A stylizer is any callable taking an Image and returning an Image of the
same size. The built-ins are fully deterministic stand-ins for heavyweight
models; the external hook shells out to a user-supplied command so real
models can be dropped in without code changes. `simulated_cost_ms` adds an
artificial delay so benchmarks can model expensive inference.
"""
from __future__ import annotations

import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .guidedfilter import LUMA_WEIGHTS, box_mean
from .imagecore import Image, load_image, save_image

Stylizer = Callable[[Image], Image]

KINDS = ("identity", "palette", "painterly", "external")

EXTERNAL_TIMEOUT_S = 120.0
LLOYD_ITERATIONS = 10
PAINTERLY_PALETTE_SIZE = 12


class ExternalStylizerError(RuntimeError):
    """The external stylizer command failed or broke the protocol."""


@dataclass(frozen=True)
class StylizerSpec:
    """Configuration for one of the built-in stylizers or the external hook."""

    kind: str = "identity"
    palette_size: int = 8
    kernel_radius: int = 2
    command: str = ""
    style_path: str | None = None
    simulated_cost_ms: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.palette_size < 1:
            raise ValueError("palette_size must be >= 1")
        if self.kernel_radius < 1:
            raise ValueError("kernel_radius must be >= 1")
        if self.simulated_cost_ms < 0:
            raise ValueError("simulated_cost_ms must be >= 0")
        if self.kind == "external":
            if "{in}" not in self.command or "{out}" not in self.command:
                raise ValueError(
                    "external stylizer command must contain the {in} and {out} placeholders"
                )


def stylize(spec: StylizerSpec, img: Image) -> Image:
    """Apply the configured transform; output dimensions equal the input's."""
    if spec.kind == "identity":
        out = img
    elif spec.kind == "palette":
        out = _palette_quantize(img, spec.palette_size)
    elif spec.kind == "painterly":
        blurred = np.empty_like(img.pixels)
        for c in range(3):
            blurred[:, :, c] = box_mean(img.pixels[:, :, c], spec.kernel_radius)
        out = _palette_quantize(Image(np.clip(blurred, 0.0, 1.0)), PAINTERLY_PALETTE_SIZE)
    else:
        out = _run_external(spec, img)
    if spec.simulated_cost_ms > 0:
        time.sleep(spec.simulated_cost_ms / 1000.0)
    return out


def make_stylizer(spec: StylizerSpec) -> Stylizer:
    """Bind a spec into the plain callable form the pipelines consume."""
    return lambda img: stylize(spec, img)


class CountingStylizer:
    """Wrapper that counts invocations; used by the self-test and benches."""

    def __init__(self, inner: Stylizer):
        self.inner = inner
        self.calls = 0

    def __call__(self, img: Image) -> Image:
        self.calls += 1
        return self.inner(img)


def _palette_quantize(img: Image, k: int) -> Image:
    """Deterministic k-means color quantization.

    Centroids start at evenly spaced quantiles of the luminance-sorted
    pixels, run a fixed 10 Lloyd iterations with a fixed order, and each
    pixel ends on its nearest centroid (ties to the lower index). Empty
    clusters keep their previous centroid.
    """
    px = img.pixels.reshape(-1, 3)
    n = px.shape[0]
    luma = px @ LUMA_WEIGHTS
    order = np.argsort(luma, kind="stable")
    quantiles = np.minimum(((np.arange(k) + 0.5) * n / k).astype(np.int64), n - 1)
    centroids = px[order[quantiles]].copy()

    for _ in range(LLOYD_ITERATIONS):
        assign = _nearest_centroid(px, centroids)
        counts = np.bincount(assign, minlength=k)
        sums = np.stack(
            [np.bincount(assign, weights=px[:, c], minlength=k) for c in range(3)],
            axis=1,
        )
        occupied = counts > 0
        centroids[occupied] = sums[occupied] / counts[occupied, None]

    assign = _nearest_centroid(px, centroids)
    out = centroids[assign].reshape(img.pixels.shape)
    return Image(np.clip(out, 0.0, 1.0))


def _nearest_centroid(px: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # Squared distances without the constant |px|^2 term; argmin ties
    # resolve to the lower centroid index.
    d2 = (centroids * centroids).sum(axis=1)[None, :] - 2.0 * (px @ centroids.T)
    return np.argmin(d2, axis=1)


def _run_external(spec: StylizerSpec, img: Image) -> Image:
    command = spec.command
    if "{style}" in command:
        if not spec.style_path:
            raise ExternalStylizerError(
                "command uses the {style} placeholder but no style image was configured"
            )
        command = command.replace("{style}", spec.style_path)
    with tempfile.TemporaryDirectory(prefix="mvstyle-") as tmp:
        in_path = Path(tmp) / "in.png"
        out_path = Path(tmp) / "out.png"
        save_image(img, in_path)
        command = command.replace("{in}", str(in_path)).replace("{out}", str(out_path))
        try:
            proc = subprocess.run(
                command,
                shell=True,
                capture_output=True,
                timeout=EXTERNAL_TIMEOUT_S,
            )
        except subprocess.TimeoutExpired as exc:
            raise ExternalStylizerError(
                f"external stylizer timed out after {EXTERNAL_TIMEOUT_S:.0f}s: {command}"
            ) from exc
        if proc.returncode != 0:
            stderr = proc.stderr.decode(errors="replace").strip()
            raise ExternalStylizerError(
                f"external stylizer exited {proc.returncode}: {stderr or command}"
            )
        if not out_path.exists():
            raise ExternalStylizerError(f"external stylizer wrote no output: {command}")
        result = load_image(out_path)
    if result.shape != img.shape:
        raise ExternalStylizerError(
            f"external stylizer changed dimensions from {img.shape} to {result.shape}"
        )
    return result
