"""End-to-end multi-view stylization pipelines and the consistency metric.

`run_ours` stylizes the left view once, re-projects the result to the right
viewpoint, refines both with a guided filter against the clean originals,
and then synthesizes every requested view by warping and blending the two
refined images. The three reference pipelines trade that structure away in
different directions and exist for comparison: `run_baseline` stylizes
every synthesized view, `run_approach2` stylizes both inputs and synthesizes
from the stylized pair, `run_approach3` synthesizes from the stylized left
view only and fixes it up per view with a guided filter plus sharpening.

Stylizer calls are always serialized (a heavyweight model is a single
shared resource); view synthesis parallelizes across views and is
deterministic regardless of thread count.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .guidedfilter import FilterParams, default_params, guided_filter, unsharp_mask
from .imagecore import Direction, DisparityMap, Image, Viewpoint
from .inpaint import STRATEGIES
from .stylizer import Stylizer, StylizerSpec, make_stylizer
from .viewsynth import (
    DEPTH_ORDERS,
    forward_warp,
    scale_disparity,
    synthesize_blend,
    synthesize_one,
)

AUTO_FILTER = "auto"

Inpainter = Callable


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a pipeline run needs besides the four input rasters.

    `filter_params` may be a FilterParams, the string "auto" (derive the
    radius from the image size), or None to disable filtering entirely.
    `threads` of None means one worker per CPU.
    """

    stylizer: Union[StylizerSpec, Stylizer]
    viewpoints: tuple
    filter_params: Union[FilterParams, str, None] = AUTO_FILTER
    inpaint: Union[str, Inpainter] = "reflect"
    threads: int | None = None
    depth_order: str = "smaller"

    def __post_init__(self):
        vps = tuple(self.viewpoints)
        if not vps:
            raise ValueError("viewpoints must be non-empty")
        if not all(isinstance(v, Viewpoint) for v in vps):
            raise TypeError("viewpoints must be Viewpoint instances")
        positions = [v.position for v in vps]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError(f"viewpoints must be strictly increasing, got {positions}")
        if isinstance(self.filter_params, str) and self.filter_params != AUTO_FILTER:
            raise ValueError(f"filter_params string must be {AUTO_FILTER!r}")
        if isinstance(self.inpaint, str) and self.inpaint not in STRATEGIES:
            raise ValueError(f"unknown in-paint strategy {self.inpaint!r}")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.depth_order not in DEPTH_ORDERS:
            raise ValueError(f"depth_order must be one of {DEPTH_ORDERS}")
        object.__setattr__(self, "viewpoints", vps)


@dataclass(frozen=True)
class StageTimings:
    """Wall-clock milliseconds per pipeline stage. Stages may overlap."""

    stylize_ms: float
    reproject_ms: float
    filter_ms: float
    synth_per_view_ms: tuple
    total_ms: float


@dataclass(frozen=True)
class PipelineResult:
    views: tuple
    timings: StageTimings


def even_viewpoints(n: int) -> tuple:
    """n viewpoints evenly spaced on [0, 1] inclusive ([0.0] for n == 1)."""
    if n < 1:
        raise ValueError("need at least one viewpoint")
    if n == 1:
        return (Viewpoint(0.0),)
    return tuple(Viewpoint(p) for p in np.linspace(0.0, 1.0, n))


def _resolve_stylizer(cfg: PipelineConfig) -> Stylizer:
    if isinstance(cfg.stylizer, StylizerSpec):
        return make_stylizer(cfg.stylizer)
    return cfg.stylizer


def _resolve_inpainter(cfg: PipelineConfig) -> Inpainter:
    if isinstance(cfg.inpaint, str):
        return STRATEGIES[cfg.inpaint]
    return cfg.inpaint


def _resolve_filter(cfg: PipelineConfig, width: int, height: int):
    if cfg.filter_params == AUTO_FILTER:
        return default_params(width, height)
    return cfg.filter_params


def _check_inputs(i_left, i_right, d_left, d_right):
    shapes = {
        (i_left.height, i_left.width),
        (i_right.height, i_right.width),
        (d_left.height, d_left.width),
        (d_right.height, d_right.width),
    }
    if len(shapes) != 1:
        raise ValueError(f"input dimensions differ: {sorted(shapes)}")
    if d_left.direction is not Direction.LEFT_TO_RIGHT:
        raise ValueError("left disparity must be tagged LEFT_TO_RIGHT")
    if d_right.direction is not Direction.RIGHT_TO_LEFT:
        raise ValueError("right disparity must be tagged RIGHT_TO_LEFT")


def _map_views(cfg: PipelineConfig, fn, viewpoints):
    """Apply fn to each viewpoint, in parallel, preserving order and timing each."""
    workers = cfg.threads if cfg.threads is not None else (os.cpu_count() or 1)

    def timed(vp):
        start = time.perf_counter()
        view = fn(vp)
        return view, (time.perf_counter() - start) * 1000.0

    if workers == 1 or len(viewpoints) == 1:
        results = [timed(vp) for vp in viewpoints]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(timed, viewpoints))
    views = tuple(r[0] for r in results)
    times = tuple(r[1] for r in results)
    return views, times


def run_ours(
    i_left: Image,
    i_right: Image,
    d_left: DisparityMap,
    d_right: DisparityMap,
    cfg: PipelineConfig,
) -> PipelineResult:
    """Stylize once, re-project, filter, then synthesize all views."""
    _check_inputs(i_left, i_right, d_left, d_right)
    apply_style = _resolve_stylizer(cfg)
    fill = _resolve_inpainter(cfg)
    params = _resolve_filter(cfg, i_left.width, i_left.height)
    t_start = time.perf_counter()

    t0 = time.perf_counter()
    styled_left = apply_style(i_left)
    stylize_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    styled_right = synthesize_one(
        styled_left, d_left, Viewpoint(0.0), Viewpoint(1.0), fill, cfg.depth_order
    )
    reproject_ms = (time.perf_counter() - t0) * 1000.0

    t0 = time.perf_counter()
    if params is not None:
        refined_left = guided_filter(styled_left, i_left, params)
        refined_right = guided_filter(styled_right, i_right, params)
    else:
        refined_left = styled_left
        refined_right = styled_right
    filter_ms = (time.perf_counter() - t0) * 1000.0

    views, per_view = _map_views(
        cfg,
        lambda vp: synthesize_blend(
            refined_left, refined_right, d_left, d_right, vp, fill, cfg.depth_order
        ),
        cfg.viewpoints,
    )
    total_ms = (time.perf_counter() - t_start) * 1000.0
    return PipelineResult(
        views=views,
        timings=StageTimings(stylize_ms, reproject_ms, filter_ms, per_view, total_ms),
    )


def run_baseline(
    i_left: Image,
    i_right: Image,
    d_left: DisparityMap,
    d_right: DisparityMap,
    cfg: PipelineConfig,
) -> PipelineResult:
    """Synthesize naturalistic views, then stylize each one individually."""
    _check_inputs(i_left, i_right, d_left, d_right)
    apply_style = _resolve_stylizer(cfg)
    fill = _resolve_inpainter(cfg)
    t_start = time.perf_counter()

    natural, per_view = _map_views(
        cfg,
        lambda vp: synthesize_blend(
            i_left, i_right, d_left, d_right, vp, fill, cfg.depth_order
        ),
        cfg.viewpoints,
    )

    t0 = time.perf_counter()
    views = tuple(apply_style(view) for view in natural)
    stylize_ms = (time.perf_counter() - t0) * 1000.0

    total_ms = (time.perf_counter() - t_start) * 1000.0
    return PipelineResult(
        views=views,
        timings=StageTimings(stylize_ms, 0.0, 0.0, per_view, total_ms),
    )


def run_approach2(
    i_left: Image,
    i_right: Image,
    d_left: DisparityMap,
    d_right: DisparityMap,
    cfg: PipelineConfig,
) -> PipelineResult:
    """Stylize both inputs, then synthesize from the stylized pair. No filter."""
    _check_inputs(i_left, i_right, d_left, d_right)
    apply_style = _resolve_stylizer(cfg)
    fill = _resolve_inpainter(cfg)
    t_start = time.perf_counter()

    t0 = time.perf_counter()
    styled_left = apply_style(i_left)
    styled_right = apply_style(i_right)
    stylize_ms = (time.perf_counter() - t0) * 1000.0

    views, per_view = _map_views(
        cfg,
        lambda vp: synthesize_blend(
            styled_left, styled_right, d_left, d_right, vp, fill, cfg.depth_order
        ),
        cfg.viewpoints,
    )
    total_ms = (time.perf_counter() - t_start) * 1000.0
    return PipelineResult(
        views=views,
        timings=StageTimings(stylize_ms, 0.0, 0.0, per_view, total_ms),
    )


def run_approach3(
    i_left: Image,
    i_right: Image,
    d_left: DisparityMap,
    d_right: DisparityMap,
    cfg: PipelineConfig,
) -> PipelineResult:
    """Synthesize every view from the stylized left image only, then filter
    each against a naturalistic render of the same viewpoint and sharpen."""
    _check_inputs(i_left, i_right, d_left, d_right)
    apply_style = _resolve_stylizer(cfg)
    fill = _resolve_inpainter(cfg)
    params = _resolve_filter(cfg, i_left.width, i_left.height)
    t_start = time.perf_counter()

    t0 = time.perf_counter()
    styled_left = apply_style(i_left)
    stylize_ms = (time.perf_counter() - t0) * 1000.0

    filter_total = [0.0] * len(cfg.viewpoints)
    index_of = {vp: i for i, vp in enumerate(cfg.viewpoints)}

    def render(vp):
        styled = synthesize_one(
            styled_left, d_left, Viewpoint(0.0), vp, fill, cfg.depth_order
        )
        natural = synthesize_blend(
            i_left, i_right, d_left, d_right, vp, fill, cfg.depth_order
        )
        if params is None:
            return styled
        t_f = time.perf_counter()
        refined = guided_filter(styled, natural, params)
        sharpened = unsharp_mask(refined, amount=0.5, radius=1)
        filter_total[index_of[vp]] = (time.perf_counter() - t_f) * 1000.0
        return sharpened

    views, per_view = _map_views(cfg, render, cfg.viewpoints)
    total_ms = (time.perf_counter() - t_start) * 1000.0
    return PipelineResult(
        views=views,
        timings=StageTimings(stylize_ms, 0.0, sum(filter_total), per_view, total_ms),
    )


PIPELINES = {
    "ours": run_ours,
    "baseline": run_baseline,
    "approach2": run_approach2,
    "approach3": run_approach3,
}


def consistency_error(
    views: Sequence[Image],
    d_left: DisparityMap,
    viewpoints: Sequence[Viewpoint],
    depth_order: str = "smaller",
) -> float:
    """Mean cross-view color drift of co-visible pixels.

    Each view is forward-warped (no in-painting) to its neighbor's
    viewpoint using the left disparity map rescaled for that hop, and
    compared on the pixels the warp reaches. Lower is more consistent.
    """
    if len(views) < 2:
        raise ValueError("consistency_error needs at least two views")
    if len(views) != len(viewpoints):
        raise ValueError("views and viewpoints must pair up")
    pair_errors = []
    for i in range(len(views) - 1):
        scaled = scale_disparity(d_left, viewpoints[i], viewpoints[i + 1])
        buf = forward_warp(views[i], scaled, depth_order)
        mask = buf.color.valid
        if mask.any():
            diff = np.abs(
                buf.color.image.pixels[mask] - views[i + 1].pixels[mask]
            )
            pair_errors.append(float(diff.mean()))
        else:
            pair_errors.append(0.0)
    return float(np.mean(pair_errors))
