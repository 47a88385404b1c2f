"""Exact chain pair simplification under the discrete Frechet distance."""

from .errors import (
    ChainFormatError,
    ChainPairError,
    MemoryBudgetError,
    NoSolutionError,
    PdbParseError,
    RCapInconclusiveError,
    SizeGuardError,
)
from .geometry import (
    Chain,
    FrechetResult,
    Point,
    discrete_frechet,
    euclidean_distance,
    frechet_decision,
    verify_simplification,
)
from .solver import (
    ANCHORED,
    FREE_DOGS,
    Configuration,
    CpsParams,
    CpsSolution,
    SolveStats,
    cps3f_decision,
    cps3f_min_dp,
    cps3f_min_graph,
    obtainable_weights,
    solve_with_cap_doubling,
    wcps3f_decision,
    wcps3f_min,
)
from .one_sided import one_sided_cps3f_min, simplify_min_delta, simplify_min_k
from .oracle import (
    ReductionInstance,
    brute_cps3f,
    brute_min_delta,
    brute_min_k,
    brute_one_sided,
    make_reduction_instance,
    partition_brute,
)
from .pdb_io import BackboneRecord, fetch_pdb, load_chain, parse_pdb, save_chain

__version__ = "0.1.0"

__all__ = [
    "ANCHORED",
    "FREE_DOGS",
    "BackboneRecord",
    "Chain",
    "ChainFormatError",
    "ChainPairError",
    "Configuration",
    "CpsParams",
    "CpsSolution",
    "FrechetResult",
    "MemoryBudgetError",
    "NoSolutionError",
    "PdbParseError",
    "Point",
    "RCapInconclusiveError",
    "ReductionInstance",
    "SizeGuardError",
    "SolveStats",
    "brute_cps3f",
    "brute_min_delta",
    "brute_min_k",
    "brute_one_sided",
    "cps3f_decision",
    "cps3f_min_dp",
    "cps3f_min_graph",
    "discrete_frechet",
    "euclidean_distance",
    "fetch_pdb",
    "frechet_decision",
    "load_chain",
    "make_reduction_instance",
    "obtainable_weights",
    "one_sided_cps3f_min",
    "parse_pdb",
    "partition_brute",
    "save_chain",
    "simplify_min_delta",
    "simplify_min_k",
    "solve_with_cap_doubling",
    "verify_simplification",
    "wcps3f_decision",
    "wcps3f_min",
]
