"""Runtime benchmarking of the pipelines across view counts.

Each (method, view count) cell runs one discarded warm-up followed by the
timed repeats; cells execute sequentially so they do not contaminate each
other. Timings cover pipeline execution only, never disk I/O.
"""
from __future__ import annotations

import io
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pipeline import PIPELINES, PipelineConfig, even_viewpoints
from .scenes import StereoScene
from .stylizer import StylizerSpec

CSV_HEADER = "method,views,median_ms,p10_ms,p90_ms"


@dataclass(frozen=True)
class BenchRow:
    method: str
    views: int
    median_ms: float
    p10_ms: float
    p90_ms: float


@dataclass(frozen=True)
class BenchReport:
    rows: tuple

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(
                f"{r.method},{r.views},{r.median_ms:.3f},{r.p10_ms:.3f},{r.p90_ms:.3f}\n"
            )
        return buf.getvalue()

    def median(self, method: str, views: int) -> float:
        for r in self.rows:
            if r.method == method and r.views == views:
                return r.median_ms
        raise KeyError(f"no bench row for {method} at {views} views")

    def scaling_ratios(self) -> dict:
        """time(most views) / time(fewest views), per method."""
        methods = {r.method for r in self.rows}
        ratios = {}
        for m in sorted(methods):
            counts = sorted(r.views for r in self.rows if r.method == m)
            if len(counts) >= 2:
                ratios[m] = self.median(m, counts[-1]) / self.median(m, counts[0])
        return ratios


def run_bench(
    scene: StereoScene,
    methods: Sequence[str],
    view_counts: Sequence[int],
    stylizer: StylizerSpec,
    repeats: int,
    filter_params="auto",
    inpaint="reflect",
    threads: int | None = None,
    depth_order: str = "smaller",
) -> BenchReport:
    """Median/p10/p90 wall milliseconds for each (method, view count) cell."""
    if repeats < 3:
        raise ValueError("repeats must be >= 3")
    if any(n < 1 for n in view_counts):
        raise ValueError("view counts must be >= 1")
    unknown = [m for m in methods if m not in PIPELINES]
    if unknown:
        raise ValueError(f"unknown methods: {unknown}")

    rows = []
    for method in methods:
        run = PIPELINES[method]
        for n in view_counts:
            cfg = PipelineConfig(
                stylizer=stylizer,
                viewpoints=even_viewpoints(n),
                filter_params=filter_params,
                inpaint=inpaint,
                threads=threads,
                depth_order=depth_order,
            )
            run(scene.left, scene.right, scene.disp_left, scene.disp_right, cfg)  # warm-up
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                run(scene.left, scene.right, scene.disp_left, scene.disp_right, cfg)
                times.append((time.perf_counter() - t0) * 1000.0)
            rows.append(
                BenchRow(
                    method=method,
                    views=n,
                    median_ms=float(np.median(times)),
                    p10_ms=float(np.percentile(times, 10)),
                    p90_ms=float(np.percentile(times, 90)),
                )
            )
    return BenchReport(rows=tuple(rows))
