"""Multi-view consistent stylization of stereo pairs.

Stylize one view, re-project it geometrically, refine with a guided
filter, and synthesize any number of output viewpoints, so the expensive
stylizer runs once no matter how many views are rendered.
"""

from .bench import BenchReport, BenchRow, run_bench
from .guidedfilter import FilterParams, box_mean, default_params, guided_filter, unsharp_mask
from .imagecore import (
    Direction,
    DisparityMap,
    Image,
    MaskedImage,
    Viewpoint,
    load_disparity,
    load_image,
    save_image,
)
from .inpaint import AllInvalidError, inpaint_nearest, inpaint_reflect
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    StageTimings,
    consistency_error,
    even_viewpoints,
    run_approach2,
    run_approach3,
    run_baseline,
    run_ours,
)
from .scenes import StereoScene, scene_suite, two_layer
from .stylizer import CountingStylizer, ExternalStylizerError, StylizerSpec, make_stylizer, stylize
from .viewsynth import (
    WarpBuffer,
    blend_alpha,
    forward_warp,
    scale_disparity,
    synthesize_blend,
    synthesize_one,
)

__all__ = [
    "AllInvalidError",
    "BenchReport",
    "BenchRow",
    "CountingStylizer",
    "Direction",
    "DisparityMap",
    "ExternalStylizerError",
    "FilterParams",
    "Image",
    "MaskedImage",
    "PipelineConfig",
    "PipelineResult",
    "StageTimings",
    "StereoScene",
    "StylizerSpec",
    "Viewpoint",
    "WarpBuffer",
    "blend_alpha",
    "box_mean",
    "consistency_error",
    "default_params",
    "even_viewpoints",
    "forward_warp",
    "guided_filter",
    "inpaint_nearest",
    "inpaint_reflect",
    "load_disparity",
    "load_image",
    "make_stylizer",
    "run_approach2",
    "run_approach3",
    "run_baseline",
    "run_bench",
    "run_ours",
    "save_image",
    "scale_disparity",
    "scene_suite",
    "stylize",
    "synthesize_blend",
    "synthesize_one",
    "two_layer",
    "unsharp_mask",
]

__version__ = "0.1.0"
