"""Empirical statistics for halting times and edge spectra."""

from .conditions import (
    Condition2Result,
    ProbabilityTable,
    condition1,
    condition1_limit_check,
    condition1_table,
    condition2,
    condition2_table,
)
from .edge import EdgeReport, cross_n_drift, edge_statistics_suite, weight_reference_cdf
from .empirical import EmpiricalDistribution, ks_to_reference, ks_two_sample, tau_normalize
from .scaling import ScalingConstants, check_scaling_region, gap_scale, in_scaling_region, theorem1_scale

__all__ = [
    "Condition2Result",
    "EdgeReport",
    "EmpiricalDistribution",
    "ProbabilityTable",
    "ScalingConstants",
    "check_scaling_region",
    "condition1",
    "condition1_limit_check",
    "condition1_table",
    "condition2",
    "condition2_table",
    "cross_n_drift",
    "edge_statistics_suite",
    "gap_scale",
    "in_scaling_region",
    "ks_to_reference",
    "ks_two_sample",
    "tau_normalize",
    "theorem1_scale",
    "weight_reference_cdf",
]
