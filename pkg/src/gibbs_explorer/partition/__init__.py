"""Partition functions and void probabilities"""

from .partition import (
    PartitionResult,
    expected_partition_function,
    SeriesTerm,
    local_stability_ceiling,
    partition,
    partition_over_windows,
    partition_poisson_mc,
    partition_series,
    theta_mass,
    void_probability,
)

__all__ = [
    "partition_series", "partition_poisson_mc", "partition", "void_probability",
    "local_stability_ceiling", "partition_over_windows", "theta_mass",
    "PartitionResult", "SeriesTerm", "expected_partition_function",
]
