"""Capacity of 2-D constrained channels via fully adapted sequential Monte Carlo."""

from ._core import (
    CapacityEstimate,
    LatticeModel,
    PairwisePotential,
    between_psi,
    capacity_from_log2Z,
    column_phi,
    conditional_normalizer,
    estimate,
    exact_capacity,
    exact_log2_Z,
    resampling_weight,
    rll_potential,
    run_bench,
    sample_column,
    valid_column_count,
)

__all__ = [
    "CapacityEstimate",
    "LatticeModel",
    "PairwisePotential",
    "between_psi",
    "capacity_from_log2Z",
    "column_phi",
    "conditional_normalizer",
    "estimate",
    "exact_capacity",
    "exact_log2_Z",
    "resampling_weight",
    "rll_potential",
    "run_bench",
    "sample_column",
    "valid_column_count",
]
