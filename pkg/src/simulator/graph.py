"""
Synthetic graphs stored as per-edge-type adjacency layers.

Every edge type is a separate data structure. Its adjacency lists are packed
into extents of `extent_size` consecutive vertices, and the extents of data
structure `ds` occupy ids [ds * extents_per_ds, (ds + 1) * extents_per_ds).
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from config.settings import settings
from src.errors import UnknownVertexError
from src.workload import GRAPH500_P, RmatParams, make_rng, rmat_sample_cells

logger = logging.getLogger(__name__)


@dataclass
class SyntheticGraph:
    """Vertex set shared by all layers, one CSR adjacency per edge type."""
    num_vertices: int
    layers: Dict[str, sp.csr_matrix]
    extent_size: int = field(default_factory=lambda: settings.EXTENT_SIZE)

    def __post_init__(self):
        for name, adj in self.layers.items():
            if adj.shape != (self.num_vertices, self.num_vertices):
                raise ValueError(f"Layer '{name}' has shape {adj.shape}, expected {self.num_vertices} square")
            adj.sort_indices()

    @property
    def layer_names(self) -> List[str]:
        return list(self.layers)

    @property
    def num_ds(self) -> int:
        return len(self.layers)

    @property
    def extents_per_ds(self) -> int:
        return max(1, math.ceil(self.num_vertices / self.extent_size))

    @property
    def num_extents(self) -> int:
        return self.num_ds * self.extents_per_ds

    @property
    def num_edges(self) -> int:
        return int(sum(adj.nnz for adj in self.layers.values()))

    def ds_index(self, layer: str) -> int:
        try:
            return self.layer_names.index(layer)
        except ValueError as e:
            raise KeyError(f"Unknown edge type '{layer}', graph has {self.layer_names}") from e

    def extent_of(self, vertices, ds: int) -> np.ndarray:
        """Extent holding the adjacency of `vertices` in data structure `ds`."""
        vertices = np.asarray(vertices, dtype=np.int64)
        return ds * self.extents_per_ds + vertices // self.extent_size

    def extent_tags(self) -> np.ndarray:
        """Data-structure index of every extent."""
        return np.repeat(np.arange(self.num_ds, dtype=np.int64), self.extents_per_ds)

    def check_vertex(self, vertex: int) -> None:
        if not 0 <= vertex < self.num_vertices:
            raise UnknownVertexError(f"Vertex {vertex} not in graph of {self.num_vertices} vertices")

    def largest_component(self, layer: Optional[str] = None) -> np.ndarray:
        """Vertices of the largest weakly connected component of a layer."""
        adj = self.layers[layer or self.layer_names[0]]
        _, labels = connected_components(adj, directed=True, connection="weak")
        biggest = np.bincount(labels).argmax()
        return np.flatnonzero(labels == biggest)


def _adjacency(rows: np.ndarray, cols: np.ndarray, n: int, symmetric: bool) -> sp.csr_matrix:
    if symmetric:
        rows, cols = np.concatenate([rows, cols]), np.concatenate([cols, rows])
    keep = rows != cols
    data = np.ones(int(keep.sum()), dtype=np.int32)
    adj = sp.csr_matrix((data, (rows[keep], cols[keep])), shape=(n, n))
    adj.sum_duplicates()
    adj.data[:] = 1
    adj.sort_indices()
    return adj


def rmat_graph(
    scale: int,
    edge_factor: int = 16,
    p: Sequence[float] = GRAPH500_P,
    seed: int = 0,
    extent_size: Optional[int] = None
) -> SyntheticGraph:
    """
    Undirected R-MAT graph with 2^scale vertices and about edge_factor * 2^scale edges.

    Vertex ids are not permuted, so consecutive ids share access patterns.
    """
    n = 1 << scale
    params = RmatParams(p=tuple(p), depth=scale, seed=seed)
    rows, cols = rmat_sample_cells(params, edge_factor * n, make_rng(seed))
    adj = _adjacency(rows, cols, n, symmetric=True)
    logger.info(f"R-MAT graph: {n} vertices, {adj.nnz // 2} undirected edges")
    return SyntheticGraph(n, {"edges": adj}, extent_size or settings.EXTENT_SIZE)


def typed_graph(
    scale: int,
    follows_factor: int = 8,
    tweets_factor: int = 4,
    p: Sequence[float] = GRAPH500_P,
    seed: int = 0,
    extent_size: Optional[int] = None
) -> SyntheticGraph:
    """
    Two edge types over one vertex set: `follows` (user -> user) and
    `tweets` (user -> tweet), each an independent directed R-MAT layer.
    """
    n = 1 << scale
    follows = RmatParams(p=tuple(p), depth=scale, seed=seed)
    tweets = RmatParams(p=tuple(p), depth=scale, seed=seed + 1)
    f_rows, f_cols = rmat_sample_cells(follows, follows_factor * n)
    t_rows, t_cols = rmat_sample_cells(tweets, tweets_factor * n)
    layers = {
        "follows": _adjacency(f_rows, f_cols, n, symmetric=False),
        "tweets": _adjacency(t_rows, t_cols, n, symmetric=False),
    }
    logger.info(
        f"Typed graph: {n} vertices, {layers['follows'].nnz} follows, {layers['tweets'].nnz} tweets edges"
    )
    return SyntheticGraph(n, layers, extent_size or settings.EXTENT_SIZE)


def graph_from_edges(
    num_vertices: int,
    edges: Sequence[Tuple[int, int]],
    extent_size: int,
    symmetric: bool = True,
    layer: str = "edges"
) -> SyntheticGraph:
    """Single-layer graph from an explicit edge list (fixtures and small examples)."""
    if edges:
        rows, cols = (np.asarray(x, dtype=np.int64) for x in zip(*edges))
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    return SyntheticGraph(num_vertices, {layer: _adjacency(rows, cols, num_vertices, symmetric)}, extent_size)
