"""Bounded archives of eps-efficient solutions for stochastic multi-objective search."""

from .archiver import ArchiverConfig, archive_update, archive_update_unbounded, rejection_witness, update_inplace
from .core import Archive, ArchiveEntry, Mode, ToleranceSettings, chebyshev_distance, shifted_dominates
from .metrics import (
    archive_bound_image,
    archive_bound_param,
    hamming,
    hausdorff,
    min_norm_direction,
    reference_set,
    region_of_interest,
    semi_dist,
)
from .problems import Box, Problem, get_problem
from .search import GeneratorSpec, RunSummary, run, run_shared

__version__ = "0.1.0"
