"""
Access graph and constraint vectors built from a reconstructed transition matrix.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union
import logging

import networkx as nx
import numpy as np
import pandas as pd

from src.errors import DimensionMismatchError

logger = logging.getLogger(__name__)

UNIFORM = "uniform"
LOAD = "load"


@dataclass
class AccessGraph:
    """Undirected weighted graph over extents, dense symmetric weights."""
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatchError(f"Access graph needs a square weight matrix, got {w.shape}")
        if not np.allclose(w, w.T):
            raise ValueError("Access graph weights must be symmetric")
        if (w < 0).any():
            raise ValueError("Access graph weights must be nonnegative")
        w = w.copy()
        np.fill_diagonal(w, 0.0)
        self.weights = w

    @property
    def num_vertices(self) -> int:
        return self.weights.shape[0]

    def weight(self, u: int, v: int) -> float:
        return float(self.weights[u, v])

    def edges(self):
        """(u, v, weight) arrays for u < v with positive weight."""
        u, v = np.nonzero(np.triu(self.weights, k=1))
        return u, v, self.weights[u, v]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_vertices))
        for u, v, w in zip(*self.edges()):
            graph.add_edge(int(u), int(v), weight=float(w))
        return graph


def build_access_graph(m_hat: np.ndarray) -> AccessGraph:
    """Edge weight(u, v) = M_hat[u, v] + M_hat[v, u]; the diagonal is dropped."""
    m_hat = np.asarray(m_hat, dtype=np.float64)
    if m_hat.ndim != 2 or m_hat.shape[0] != m_hat.shape[1]:
        raise DimensionMismatchError(f"Transition matrix must be square, got {m_hat.shape}")
    return AccessGraph(m_hat + m_hat.T)


@dataclass
class ConstraintMatrix:
    """
    Per-vertex constraint vectors, one column per constraint.

    Every column sums to 1, so a perfectly balanced part holds 1/num_parts
    of each constraint.
    """
    weights: np.ndarray
    names: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 2:
            raise DimensionMismatchError(f"Constraint matrix must be 2-d, got {self.weights.shape}")
        if not self.names:
            self.names = [f"c{i}" for i in range(self.weights.shape[1])]
        if len(self.names) != self.weights.shape[1]:
            raise DimensionMismatchError(f"{len(self.names)} names for {self.weights.shape[1]} constraints")

    @property
    def num_vertices(self) -> int:
        return self.weights.shape[0]

    @property
    def num_constraints(self) -> int:
        return self.weights.shape[1]


def marginal_load(m_hat: np.ndarray) -> np.ndarray:
    """Access frequency of each extent: mean of its row and column sums."""
    m_hat = np.asarray(m_hat, dtype=np.float64)
    return (m_hat.sum(axis=0) + m_hat.sum(axis=1)) / 2.0


def build_constraints(
    num_extents: int,
    ds_tags: Optional[Sequence[int]] = None,
    load: Optional[np.ndarray] = None
) -> ConstraintMatrix:
    """
    Uniform constraint, one indicator per data structure, optional access load.

    Args:
        num_extents: Number of vertices
        ds_tags: Data-structure tag of each extent
        load: Nonnegative per-extent access load

    Returns:
        ConstraintMatrix with normalized columns; all-zero columns are dropped
    """
    columns: List[np.ndarray] = [np.ones(num_extents)]
    names = [UNIFORM]

    if ds_tags is not None:
        tags = np.asarray(ds_tags)
        if tags.shape != (num_extents,):
            raise DimensionMismatchError(f"{tags.size} tags for {num_extents} extents")
        for tag in np.unique(tags):
            columns.append((tags == tag).astype(np.float64))
            names.append(f"ds{int(tag)}")

    if load is not None:
        load = np.asarray(load, dtype=np.float64)
        if load.shape != (num_extents,):
            raise DimensionMismatchError(f"{load.size} loads for {num_extents} extents")
        if (load < 0).any():
            raise ValueError("Access load must be nonnegative")
        columns.append(load)
        names.append(LOAD)

    kept_cols, kept_names = [], []
    for col, name in zip(columns, names):
        total = col.sum()
        if total <= 0:
            logger.warning(f"Dropping constraint '{name}': no vertex carries weight")
            continue
        kept_cols.append(col / total)
        kept_names.append(name)
    return ConstraintMatrix(np.column_stack(kept_cols), kept_names)


def write_edge_list(graph: AccessGraph, path: Union[str, Path]) -> None:
    """One `u v weight` line per positive edge, u < v."""
    with open(path, "w", encoding="utf-8") as f:
        for u, v, w in zip(*graph.edges()):
            f.write(f"{int(u)} {int(v)} {float(w)!r}\n")


def read_edge_list(path: Union[str, Path], num_vertices: Optional[int] = None) -> AccessGraph:
    """Read a `u v weight` edge list; repeated edges accumulate."""
    frame = pd.read_csv(path, sep=r"\s+", header=None, names=["u", "v", "weight"], comment="#")
    n = num_vertices
    if n is None:
        n = int(max(frame["u"].max(), frame["v"].max()) + 1) if len(frame) else 0
    w = np.zeros((n, n), dtype=np.float64)
    u = frame["u"].to_numpy(dtype=np.int64)
    v = frame["v"].to_numpy(dtype=np.int64)
    weight = frame["weight"].to_numpy(dtype=np.float64)
    keep = u != v
    np.add.at(w, (u[keep], v[keep]), weight[keep])
    np.add.at(w, (v[keep], u[keep]), weight[keep])
    return AccessGraph(w)


def read_matrix_csv(path: Union[str, Path]) -> np.ndarray:
    """Dense square transition matrix stored as headerless CSV."""
    matrix = pd.read_csv(path, header=None).to_numpy(dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"Matrix file {path} is not square: {matrix.shape}")
    return matrix


def read_tags_csv(path: Union[str, Path], num_extents: int) -> np.ndarray:
    """`extent_id,ds` CSV into a dense tag array."""
    frame = pd.read_csv(path)
    tags = np.full(num_extents, -1, dtype=np.int64)
    tags[frame["extent_id"].to_numpy(dtype=np.int64)] = frame["ds"].to_numpy(dtype=np.int64)
    if (tags < 0).any():
        raise DimensionMismatchError(f"Tag file {path} does not cover all {num_extents} extents")
    return tags
