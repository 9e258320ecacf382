"""Command-line interface: render, metrics, bench, and selftest commands.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
import time
from pathlib import Path

from .bench import run_bench
from .guidedfilter import FilterParams
from .imagecore import Direction, Viewpoint, load_disparity, load_image, save_image
from .pipeline import (
    PIPELINES,
    PipelineConfig,
    consistency_error,
    even_viewpoints,
    run_approach2,
    run_approach3,
    run_baseline,
    run_ours,
)
from .scenes import StereoScene, two_layer
from .stylizer import CountingStylizer, StylizerSpec, make_stylizer


def _add_stylizer_flags(p: argparse.ArgumentParser):
    p.add_argument("--stylizer", choices=["identity", "palette", "painterly", "external"],
                   default="identity", help="which stylizer to run (default identity)")
    p.add_argument("--palette-size", type=int, default=8)
    p.add_argument("--kernel-radius", type=int, default=2)
    p.add_argument("--command", default="",
                   help="external stylizer command template with {in} and {out}")
    p.add_argument("--style", default=None,
                   help="style image path, substituted for {style} in external commands")
    p.add_argument("--simulated-cost-ms", type=int, default=0,
                   help="artificial per-call stylizer delay for benchmarking")


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--gf-radius", type=int, default=-1,
                   help="guided filter radius; -1 auto from image size, 0 disables filtering")
    p.add_argument("--gf-eps", type=float, default=1e-3)
    p.add_argument("--inpaint", choices=["reflect", "nearest"], default="reflect")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: MVST_THREADS env var, else all CPUs)")
    p.add_argument("--depth-test-order", choices=["smaller", "larger"], default="smaller",
                   help="which colliding disparity wins the depth test")


def _add_disparity_flags(p: argparse.ArgumentParser):
    p.add_argument("--disp-scale", type=float, default=None,
                   help="scale for 16-bit PNG disparity (value = raw*scale + offset)")
    p.add_argument("--disp-offset", type=float, default=None,
                   help="offset for 16-bit PNG disparity")


def _build_spec(args) -> StylizerSpec:
    return StylizerSpec(
        kind=args.stylizer,
        palette_size=args.palette_size,
        kernel_radius=args.kernel_radius,
        command=args.command,
        style_path=args.style,
        simulated_cost_ms=args.simulated_cost_ms,
    )


def _filter_params(args):
    if args.gf_radius == 0:
        return None
    if args.gf_radius < 0:
        return "auto"
    return FilterParams(radius=args.gf_radius, epsilon=args.gf_eps)


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("MVST_THREADS")
    return int(env) if env else None


def _parse_views(text: str, parser: argparse.ArgumentParser):
    """Either an integer count (evenly spaced on [0,1]) or a comma list."""
    if re.fullmatch(r"\d+", text.strip()):
        n = int(text)
        if n < 1:
            parser.error("--views count must be >= 1")
        return even_viewpoints(n)
    try:
        positions = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        parser.error(f"could not parse --views {text!r}")
    if not positions:
        parser.error("--views needs at least one position")
    if any(b <= a for a, b in zip(positions, positions[1:])):
        parser.error("--views positions must be strictly increasing")
    return tuple(Viewpoint(p) for p in positions)


def _load_scene(args, parser) -> StereoScene:
    for name in ("left", "right", "disp_left", "disp_right"):
        if getattr(args, name) is None:
            parser.error(f"--{name.replace('_', '-')} is required")
    scale, offset = args.disp_scale, args.disp_offset
    for path in (args.disp_left, args.disp_right):
        if Path(path).suffix.lower() == ".png" and (scale is None or offset is None):
            parser.error("PNG disparity input requires --disp-scale and --disp-offset")
    return StereoScene(
        name="cli",
        left=load_image(args.left),
        right=load_image(args.right),
        disp_left=load_disparity(args.disp_left, Direction.LEFT_TO_RIGHT, scale, offset),
        disp_right=load_disparity(args.disp_right, Direction.RIGHT_TO_LEFT, scale, offset),
    )


def cmd_render(args, parser) -> int:
    scene = _load_scene(args, parser)
    viewpoints = args.viewpoints
    cfg = PipelineConfig(
        stylizer=_build_spec(args),
        viewpoints=viewpoints,
        filter_params=_filter_params(args),
        inpaint=args.inpaint,
        threads=_threads(args),
        depth_order=args.depth_test_order,
    )
    result = PIPELINES[args.method](
        scene.left, scene.right, scene.disp_left, scene.disp_right, cfg
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, view in enumerate(result.views):
        save_image(view, out_dir / f"view_{i:03d}.png")
    t = result.timings
    print(f"stylize_ms={t.stylize_ms:.1f}")
    print(f"reproject_ms={t.reproject_ms:.1f}")
    print(f"filter_ms={t.filter_ms:.1f}")
    print("synth_per_view_ms=" + ",".join(f"{v:.1f}" for v in t.synth_per_view_ms))
    print(f"total_ms={t.total_ms:.1f}")
    print(f"wrote {len(result.views)} views to {out_dir}")
    return 0


def cmd_metrics(args, parser) -> int:
    view_dir = Path(args.views_dir)
    paths = sorted(view_dir.glob("view_*.png"))
    if len(paths) < 2:
        print(f"error: need at least two view_*.png files in {view_dir}", file=sys.stderr)
        return 1
    views = [load_image(p) for p in paths]
    if args.positions:
        viewpoints = _parse_views(args.positions, parser)
        if len(viewpoints) != len(views):
            parser.error(
                f"--positions count {len(viewpoints)} does not match {len(views)} views"
            )
    else:
        viewpoints = even_viewpoints(len(views))
    scale, offset = args.disp_scale, args.disp_offset
    d_left = load_disparity(args.disp_left, Direction.LEFT_TO_RIGHT, scale, offset)
    err = consistency_error(views, d_left, viewpoints, args.depth_test_order)
    print(f"{err:.9f}")
    return 0


def cmd_bench(args, parser) -> int:
    if args.synthetic:
        m = re.fullmatch(r"(\d+)x(\d+)", args.synthetic)
        if not m:
            parser.error("--synthetic must look like 512x256")
        scene = two_layer(width=int(m.group(1)), height=int(m.group(2)))
    else:
        scene = _load_scene(args, parser)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in PIPELINES]
    if bad:
        parser.error(f"unknown methods: {bad}")
    view_counts = [int(tok) for tok in args.view_counts.split(",") if tok.strip()]
    report = run_bench(
        scene,
        methods,
        view_counts,
        _build_spec(args),
        repeats=args.repeats,
        filter_params=_filter_params(args),
        inpaint=args.inpaint,
        threads=_threads(args),
        depth_order=args.depth_test_order,
    )
    csv_text = report.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    for method, ratio in report.scaling_ratios().items():
        print(f"scaling {method}: {ratio:.3f}x from fewest to most views", file=sys.stderr)
    return 0


def cmd_selftest(args, parser) -> int:
    size = (32, 32) if args.quick else (192, 128)
    scene = two_layer(width=size[0], height=size[1])
    viewpoints = even_viewpoints(4)
    spec = StylizerSpec(kind="palette", palette_size=8)
    threads = _threads(args)

    t_start = time.perf_counter()
    errors = {}
    counts = {}
    runs = {
        "ours": run_ours,
        "baseline": run_baseline,
        "approach2": run_approach2,
        "approach3": run_approach3,
    }
    for name, run in runs.items():
        counter = CountingStylizer(make_stylizer(spec))
        cfg = PipelineConfig(
            stylizer=counter,
            viewpoints=viewpoints,
            inpaint=args.inpaint,
            threads=threads,
        )
        result = run(scene.left, scene.right, scene.disp_left, scene.disp_right, cfg)
        errors[name] = consistency_error(result.views, scene.disp_left, viewpoints)
        counts[name] = counter.calls
        print(f"{name}: consistency_error={errors[name]:.6f} stylize_calls={counter.calls}")

    expected_counts = {"ours": 1, "baseline": 4, "approach2": 2, "approach3": 1}
    if args.inject_fault:
        expected_counts["ours"] = 999  # deliberately corrupted expectation (test hook)

    failures = []
    for name, expected in expected_counts.items():
        if counts[name] != expected:
            failures.append(f"stylize call count for {name}: {counts[name]} != {expected}")
    if not errors["ours"] < errors["baseline"]:
        failures.append(
            f"consistency: ours ({errors['ours']:.6f}) not below baseline ({errors['baseline']:.6f})"
        )
    if not errors["ours"] < errors["approach2"]:
        failures.append(
            f"consistency: ours ({errors['ours']:.6f}) not below approach2 ({errors['approach2']:.6f})"
        )

    elapsed = time.perf_counter() - t_start
    if failures:
        for f in failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return 1
    print(f"selftest OK in {elapsed:.1f}s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvstyle",
        description="Multi-view consistent stylization of stereo pairs.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("render", help="render stylized views from a stereo pair")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--disp-left", required=True)
    p.add_argument("--disp-right", required=True)
    p.add_argument("--views", required=True,
                   help="view count (evenly spaced) or comma list of positions")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--method", choices=sorted(PIPELINES), default="ours")
    _add_stylizer_flags(p)
    _add_common_flags(p)
    _add_disparity_flags(p)

    p = sub.add_parser("metrics", help="consistency error of a rendered view set")
    p.add_argument("--views-dir", required=True)
    p.add_argument("--disp-left", required=True)
    p.add_argument("--positions", default=None,
                   help="viewpoint positions of the views (default: evenly spaced)")
    p.add_argument("--depth-test-order", choices=["smaller", "larger"], default="smaller")
    _add_disparity_flags(p)

    p = sub.add_parser("bench", help="benchmark pipelines across view counts")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--disp-left")
    p.add_argument("--disp-right")
    p.add_argument("--synthetic", default=None, metavar="WxH",
                   help="benchmark on a generated scene of this size instead of files")
    p.add_argument("--methods", default="ours,baseline,approach2,approach3")
    p.add_argument("--view-counts", default="4,8,16")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    _add_stylizer_flags(p)
    _add_common_flags(p)
    _add_disparity_flags(p)

    p = sub.add_parser("selftest", help="end-to-end check on a synthetic scene")
    p.add_argument("--quick", action="store_true", help="32x32 scene for a fast check")
    p.add_argument("--inpaint", choices=["reflect", "nearest"], default="reflect")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd == "render":
        args.viewpoints = _parse_views(args.views, parser)
    try:
        if args.cmd == "render":
            return cmd_render(args, parser)
        if args.cmd == "metrics":
            return cmd_metrics(args, parser)
        if args.cmd == "bench":
            return cmd_bench(args, parser)
        return cmd_selftest(args, parser)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
