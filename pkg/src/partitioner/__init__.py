"""HMCPP partitioning of the extent access graph."""
from typing import Optional, Sequence

import numpy as np

from .graph import (
    AccessGraph,
    ConstraintMatrix,
    build_access_graph,
    build_constraints,
    marginal_load,
    read_edge_list,
    read_matrix_csv,
    read_tags_csv,
    write_edge_list,
)
from .metrics import PartitionMetrics, PartitionSpec, Partitioning, canonicalize, evaluate
from .distribution import (
    DistributionFunction,
    derive_distribution,
    read_distribution_csv,
    write_distribution_csv,
)
from .engines import BaseEngine, ExhaustiveEngine, HeuristicEngine, get_engine


def partition_heuristic(
    g: AccessGraph,
    c: ConstraintMatrix,
    spec: PartitionSpec,
    seed: int = 42,
    warm_starts: Optional[Sequence[np.ndarray]] = None
) -> Partitioning:
    """Greedy region growing plus refinement; deterministic for a seed."""
    return HeuristicEngine(seed=seed).partition(g, c, spec, warm_starts=warm_starts)


def partition_exhaustive(g: AccessGraph, c: ConstraintMatrix, spec: PartitionSpec) -> Partitioning:
    """Global optimum by enumeration (small instances only)."""
    return ExhaustiveEngine().partition(g, c, spec)


__all__ = [
    'AccessGraph',
    'ConstraintMatrix',
    'build_access_graph',
    'build_constraints',
    'marginal_load',
    'read_edge_list',
    'read_matrix_csv',
    'read_tags_csv',
    'write_edge_list',
    'PartitionMetrics',
    'PartitionSpec',
    'Partitioning',
    'canonicalize',
    'evaluate',
    'DistributionFunction',
    'derive_distribution',
    'read_distribution_csv',
    'write_distribution_csv',
    'BaseEngine',
    'ExhaustiveEngine',
    'HeuristicEngine',
    'get_engine',
    'partition_heuristic',
    'partition_exhaustive',
]
