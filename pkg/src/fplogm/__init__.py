"""Matrix logarithm by a fixed-point iteration on matrix exponentials."""

from .dense import CostLedger, Cost, frobenius_norm, householder_similarity, inverse, multiply, read_matrix, write_matrix
from .expm import ExpPlan, Truncation, expm, plan_exp
from .logm import (
    FixedPointConfig,
    Init,
    IterationReport,
    LogmDivergenceError,
    LogmResult,
    SpectralBounds,
    error_estimate,
    fixed_point_logm,
    gershgorin_bounds,
    init_linear,
    init_paper,
    refine,
)
from .scalar import deviation_map, f_indicator, in_region_V, region_grid, scalar_orbit

__version__ = "0.1.0"
