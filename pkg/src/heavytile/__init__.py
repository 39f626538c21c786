"""Heavy K4 tilings of weighted complete graphs: generators, an almost-cover
local search, reachability and absorbers, lattice merging, weight
quantisation and an exact small-n oracle."""

from __future__ import annotations

from .errors import (
    AbsorberError,
    BudgetError,
    CapabilityError,
    ConnectorError,
    ConstructionFailed,
    DisjointnessError,
    GraphFormatError,
    HeavyTileError,
    NotHeavyError,
)
from .graph import (
    WeightedCompleteGraph,
    load_graph,
    make_extremal,
    make_random,
    make_random_with_min_degree,
    min_weighted_degree,
    save_graph,
)
from .oracle import exact_factor_exists, exact_max_tiling
from .pipeline import run_pipeline, threshold_scan
from .tiler import almost_cover

__all__ = [
    "AbsorberError",
    "BudgetError",
    "CapabilityError",
    "ConnectorError",
    "ConstructionFailed",
    "DisjointnessError",
    "GraphFormatError",
    "HeavyTileError",
    "NotHeavyError",
    "WeightedCompleteGraph",
    "almost_cover",
    "exact_factor_exists",
    "exact_max_tiling",
    "load_graph",
    "make_extremal",
    "make_random",
    "make_random_with_min_degree",
    "min_weighted_degree",
    "run_pipeline",
    "save_graph",
    "threshold_scan",
]

__version__ = "0.1.0"
