"""Equal unit-circle packing: feasibility solver and tooling."""

from circlepack.bfgs import (
    BfgsState,
    LineSearchSpec,
    LocalBfgsResult,
    NotADescentDirectionError,
    bfgs_update,
    line_search,
    local_bfgs,
)
from circlepack.descent import RoundSchedule, grouped_descent, make_schedule, random_partition
from circlepack.energy import (
    EnergyReport,
    Instance,
    SingularOverlapError,
    SubsetEvaluator,
    circle_overlap_depth,
    container_overlap_depth,
    subset_energy,
    subset_gradient,
    total_energy,
)
from circlepack.layoutfile import LayoutParseError, read_layout, write_layout
from circlepack.radii import UnknownInstanceError, best_known_radius, bundled_sizes
from circlepack.search import (
    SearchConfig,
    SearchOutcome,
    global_search,
    random_initial_layout,
    shrink_factor,
)
from circlepack.svgout import render_svg, svg_document
from circlepack.verify import CheckReport, check_layout

__version__ = "0.1.0"

__all__ = [
    "BfgsState",
    "CheckReport",
    "EnergyReport",
    "Instance",
    "LayoutParseError",
    "LineSearchSpec",
    "LocalBfgsResult",
    "NotADescentDirectionError",
    "RoundSchedule",
    "SearchConfig",
    "SearchOutcome",
    "SingularOverlapError",
    "SubsetEvaluator",
    "UnknownInstanceError",
    "best_known_radius",
    "bfgs_update",
    "bundled_sizes",
    "check_layout",
    "circle_overlap_depth",
    "container_overlap_depth",
    "global_search",
    "grouped_descent",
    "line_search",
    "local_bfgs",
    "make_schedule",
    "random_initial_layout",
    "random_partition",
    "read_layout",
    "render_svg",
    "shrink_factor",
    "subset_energy",
    "subset_gradient",
    "svg_document",
    "total_energy",
    "write_layout",
    "__version__",
]
