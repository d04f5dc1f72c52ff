"""Distribution functions: the map from extents to cluster nodes."""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union
import logging

import numpy as np
import pandas as pd

from src.errors import DimensionMismatchError
from src.partitioner.metrics import Partitioning

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DistributionFunction:
    """Total map extent id -> node id."""
    mapping: np.ndarray
    num_nodes: int

    def __post_init__(self):
        mapping = np.asarray(self.mapping, dtype=np.int64).copy()
        if mapping.ndim != 1:
            raise DimensionMismatchError("Distribution function must be 1-d")
        if mapping.size and (mapping.min() < 0 or mapping.max() >= self.num_nodes):
            raise ValueError(f"Node ids must lie in [0, {self.num_nodes})")
        mapping.setflags(write=False)
        object.__setattr__(self, "mapping", mapping)

    @property
    def num_extents(self) -> int:
        return int(self.mapping.size)

    def __call__(self, extents):
        return self.mapping[extents]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistributionFunction):
            return NotImplemented
        return self.num_nodes == other.num_nodes and np.array_equal(self.mapping, other.mapping)

    def extents_on(self, node: int) -> List[int]:
        return np.flatnonzero(self.mapping == node).tolist()

    def remapped(self, other: "DistributionFunction") -> int:
        """Number of extents placed on a different node by `other`."""
        if other.num_extents != self.num_extents:
            raise DimensionMismatchError(f"{self.num_extents} vs {other.num_extents} extents")
        return int((self.mapping != other.mapping).sum())

    def to_partitioning(self) -> Partitioning:
        return Partitioning(self.mapping, self.num_nodes)


def derive_distribution(p: Partitioning) -> DistributionFunction:
    """Part j is served by node j."""
    return DistributionFunction(p.assignment, p.num_parts)


def write_distribution_csv(df: DistributionFunction, path: Union[str, Path]) -> None:
    frame = pd.DataFrame({"extent_id": np.arange(df.num_extents), "node_id": df.mapping})
    frame.to_csv(path, index=False)


def read_distribution_csv(path: Union[str, Path], num_nodes: int = None) -> DistributionFunction:
    frame = pd.read_csv(path).sort_values("extent_id")
    extents = frame["extent_id"].to_numpy(dtype=np.int64)
    if not np.array_equal(extents, np.arange(extents.size)):
        raise DimensionMismatchError(f"{path} does not list every extent exactly once")
    mapping = frame["node_id"].to_numpy(dtype=np.int64)
    if num_nodes is None:
        num_nodes = int(mapping.max()) + 1 if mapping.size else 1
    return DistributionFunction(mapping, num_nodes)
