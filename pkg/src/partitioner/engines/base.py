"""Base class for HMCPP solvers."""

from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from src.errors import DimensionMismatchError, InfeasiblePartitionError
from src.partitioner.graph import AccessGraph, ConstraintMatrix
from src.partitioner.metrics import FEASIBILITY_EPS, PartitionSpec, Partitioning


class BaseEngine(ABC):
    """Abstract partitioning engine: minimize edge cut subject to l_i <= c_i."""

    name = "base"

    def __init__(self, seed: int = 42):
        """
        Initialize engine.

        Args:
            seed: Random seed for reproducible partitionings
        """
        self.seed = seed

    @abstractmethod
    def partition(
        self,
        graph: AccessGraph,
        constraints: ConstraintMatrix,
        spec: PartitionSpec,
        warm_starts: Optional[Sequence[np.ndarray]] = None
    ) -> Partitioning:
        """
        Partition the graph.

        Args:
            graph: Access graph
            constraints: Normalized constraint vectors
            spec: Part count and tolerances
            warm_starts: Candidate assignments to improve on (engines may ignore)

        Returns:
            Canonical partitioning satisfying every tolerance
        """
        pass

    @staticmethod
    def check_instance(graph: AccessGraph, constraints: ConstraintMatrix, spec: PartitionSpec) -> np.ndarray:
        """
        Validate dimensions and obvious infeasibility; return the tolerance vector.

        The part holding the heaviest vertex of constraint i has
        l_i >= num_parts * max_v w_i^v, so that bound must stay within c_i.
        """
        if constraints.num_vertices != graph.num_vertices:
            raise DimensionMismatchError(
                f"Graph has {graph.num_vertices} vertices, constraints {constraints.num_vertices}"
            )
        tol = spec.tolerances(constraints.num_constraints)
        if graph.num_vertices == 0:
            return tol
        heaviest = constraints.weights.max(axis=0)
        bound = spec.num_parts * heaviest
        bad = np.flatnonzero(bound > tol + FEASIBILITY_EPS)
        if bad.size:
            i = int(bad[0])
            positive = int((constraints.weights[:, i] > 0).sum())
            raise InfeasiblePartitionError(
                f"Constraint '{constraints.names[i]}' cannot be balanced over {spec.num_parts} parts: "
                f"{positive} weighted vertices, best imbalance {bound[i]:.4f} > tolerance {tol[i]:.4f}"
            )
        return tol
