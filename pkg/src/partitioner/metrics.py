"""Partitionings, tolerances and their HMCPP quality measures."""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.errors import DimensionMismatchError
from src.partitioner.graph import LOAD, AccessGraph, ConstraintMatrix

logger = logging.getLogger(__name__)

# slack on l_i <= c_i comparisons
FEASIBILITY_EPS = 1e-9


class PartitionSpec(BaseModel):
    """Number of parts and per-constraint imbalance tolerance c_i >= 1."""

    model_config = ConfigDict(frozen=True)

    num_parts: int = Field(ge=1)
    tolerance: List[float] = Field(default_factory=lambda: [1.05])

    @field_validator("tolerance", mode="before")
    @classmethod
    def _as_list(cls, value):
        if isinstance(value, (int, float)):
            return [float(value)]
        return list(value)

    @field_validator("tolerance")
    @classmethod
    def _at_least_one(cls, value):
        if not value:
            raise ValueError("At least one tolerance is required")
        if any(c < 1.0 for c in value):
            raise ValueError(f"Tolerances must be >= 1, got {value}")
        return value

    def tolerances(self, num_constraints: int) -> np.ndarray:
        """Tolerance vector; a single value is broadcast to every constraint."""
        if len(self.tolerance) == 1:
            return np.full(num_constraints, self.tolerance[0])
        if len(self.tolerance) != num_constraints:
            raise DimensionMismatchError(f"{len(self.tolerance)} tolerances for {num_constraints} constraints")
        return np.asarray(self.tolerance, dtype=np.float64)

    @classmethod
    def for_constraints(
        cls,
        num_parts: int,
        constraints: ConstraintMatrix,
        tolerance: float,
        load_tolerance: Optional[float] = None
    ) -> "PartitionSpec":
        """Same tolerance everywhere except the access-load constraint."""
        values = []
        for name in constraints.names:
            if name == LOAD and load_tolerance is not None:
                values.append(load_tolerance)
            else:
                values.append(tolerance)
        return cls(num_parts=num_parts, tolerance=values)


@dataclass
class Partitioning:
    """Total map vertex -> part in [0, num_parts)."""
    assignment: np.ndarray
    num_parts: int

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64)
        if self.assignment.ndim != 1:
            raise DimensionMismatchError("Assignment must be 1-d")
        if self.assignment.size and (self.assignment.min() < 0 or self.assignment.max() >= self.num_parts):
            raise ValueError(f"Part ids must lie in [0, {self.num_parts})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partitioning):
            return NotImplemented
        return self.num_parts == other.num_parts and np.array_equal(self.assignment, other.assignment)

    def parts(self) -> List[List[int]]:
        return [np.flatnonzero(self.assignment == j).tolist() for j in range(self.num_parts)]

    def canonical(self) -> "Partitioning":
        return Partitioning(canonicalize(self.assignment, self.num_parts), self.num_parts)


@dataclass(frozen=True)
class PartitionMetrics:
    """Edge cut and imbalance l_i per constraint."""
    edge_cut: float
    imbalances: np.ndarray
    names: Sequence[str] = ()

    def feasible(self, tolerances: np.ndarray) -> bool:
        return bool(np.all(self.imbalances <= np.asarray(tolerances) + FEASIBILITY_EPS))

    def as_dict(self) -> dict:
        row = {"edge_cut": self.edge_cut}
        for name, value in zip(self.names, self.imbalances):
            row[f"l_{name}"] = float(value)
        return row


def canonicalize(assignment: np.ndarray, num_parts: int) -> np.ndarray:
    """Relabel parts in order of first appearance (vertex 0 lands in part 0)."""
    assignment = np.asarray(assignment, dtype=np.int64)
    mapping = np.full(num_parts, -1, dtype=np.int64)
    next_label = 0
    for part in assignment:
        if mapping[part] < 0:
            mapping[part] = next_label
            next_label += 1
    # parts that never appear keep the remaining labels
    for part in range(num_parts):
        if mapping[part] < 0:
            mapping[part] = next_label
            next_label += 1
    return mapping[assignment]


def part_loads(constraints: np.ndarray, assignment: np.ndarray, num_parts: int) -> np.ndarray:
    """Per-part constraint sums, shape (num_parts, num_constraints)."""
    loads = np.zeros((num_parts, constraints.shape[1]), dtype=np.float64)
    np.add.at(loads, assignment, constraints)
    return loads


def cut_weight(weights: np.ndarray, assignment: np.ndarray) -> float:
    """Total weight of edges whose endpoints lie in different parts."""
    crossing = assignment[:, None] != assignment[None, :]
    return float(weights[crossing].sum() / 2.0)


def evaluate(g: AccessGraph, c: ConstraintMatrix, p: Partitioning) -> PartitionMetrics:
    """
    Edge cut and imbalances l_i = num_parts * max_j sum_{v in part j} w_i^v.

    Raises:
        DimensionMismatchError: If graph, constraints and assignment disagree in size
    """
    n = g.num_vertices
    if c.num_vertices != n or p.assignment.size != n:
        raise DimensionMismatchError(
            f"Graph has {n} vertices, constraints {c.num_vertices}, assignment {p.assignment.size}"
        )
    loads = part_loads(c.weights, p.assignment, p.num_parts)
    imbalances = p.num_parts * loads.max(axis=0) if n else np.zeros(c.num_constraints)
    return PartitionMetrics(
        edge_cut=cut_weight(g.weights, p.assignment),
        imbalances=imbalances,
        names=tuple(c.names),
    )
