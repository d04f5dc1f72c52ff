"""
Graph queries and their extent-level execution plans.

A plan lists, per BSP phase, the extent read for every frontier vertex (in
ascending vertex order) and, per boundary, the distinct extent handoffs
(source extent -> destination extent) that carry the frontier forward.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from src.simulator.graph import SyntheticGraph

logger = logging.getLogger(__name__)


@dataclass
class QueryPlan:
    """Extent accesses per phase and handoffs per phase boundary."""
    phases: List[np.ndarray] = field(default_factory=list)
    boundaries: List[np.ndarray] = field(default_factory=list)
    edges: List[int] = field(default_factory=list)

    @property
    def num_phases(self) -> int:
        return len(self.phases)

    @property
    def edges_traversed(self) -> int:
        return int(sum(self.edges))


def _distinct_pairs(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if src.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    return np.unique(np.column_stack([src, dst]).astype(np.int64), axis=0)


def _expand(graph: SyntheticGraph, layer: str, frontier: np.ndarray):
    """All (source, neighbor) pairs of the frontier, sources ascending."""
    adj = graph.layers[layer]
    starts = adj.indptr[frontier]
    degrees = adj.indptr[frontier + 1] - starts
    total = int(degrees.sum())
    src = np.repeat(frontier, degrees)
    offsets = np.arange(total) - np.repeat(np.cumsum(degrees) - degrees, degrees)
    nbrs = adj.indices[np.repeat(starts, degrees) + offsets].astype(np.int64)
    return src, nbrs, total


@dataclass(frozen=True)
class BfsQuery:
    """Breadth-first search from `root`, one BSP phase per hop."""
    root: int
    max_phases: int = 10
    layer: Optional[str] = None

    def plan(self, graph: SyntheticGraph) -> QueryPlan:
        graph.check_vertex(self.root)
        layer = self.layer or graph.layer_names[0]
        ds = graph.ds_index(layer)
        visited = np.zeros(graph.num_vertices, dtype=bool)
        visited[self.root] = True
        frontier = np.array([self.root], dtype=np.int64)
        plan = QueryPlan()

        for phase in range(self.max_phases):
            plan.phases.append(graph.extent_of(frontier, ds))
            src, nbrs, scanned = _expand(graph, layer, frontier)
            plan.edges.append(scanned)
            fresh = ~visited[nbrs]
            # first discoverer in scan order owns the handoff
            found, first = np.unique(nbrs[fresh], return_index=True)
            owners = src[fresh][first]
            visited[found] = True
            if found.size == 0 or phase == self.max_phases - 1:
                break
            plan.boundaries.append(_distinct_pairs(graph.extent_of(owners, ds), graph.extent_of(found, ds)))
            frontier = found
        logger.debug(f"BFS from {self.root}: {plan.num_phases} phases, {plan.edges_traversed} edges")
        return plan


@dataclass(frozen=True)
class TwoHopQuery:
    """Neighbours of `user` over one edge type, then their neighbours over another."""
    user: int
    first: str = "follows"
    second: str = "tweets"

    def plan(self, graph: SyntheticGraph) -> QueryPlan:
        graph.check_vertex(self.user)
        ds_first = graph.ds_index(self.first)
        ds_second = graph.ds_index(self.second)
        start = np.array([self.user], dtype=np.int64)
        plan = QueryPlan()

        plan.phases.append(graph.extent_of(start, ds_first))
        _, hop1, scanned = _expand(graph, self.first, start)
        plan.edges.append(scanned)
        hop1 = np.unique(hop1)
        if hop1.size == 0:
            return plan
        src = graph.extent_of(np.full(hop1.size, self.user), ds_first)
        plan.boundaries.append(_distinct_pairs(src, graph.extent_of(hop1, ds_second)))
        plan.phases.append(graph.extent_of(hop1, ds_second))
        _, _, scanned = _expand(graph, self.second, hop1)
        plan.edges.append(scanned)
        return plan


@dataclass(frozen=True)
class PhasedQuery:
    """Explicit extent-level plan: accesses per phase and handoffs per boundary."""
    phases: Tuple[Tuple[int, ...], ...]
    handoffs: Tuple[Tuple[Tuple[int, int], ...], ...] = ()

    def plan(self, graph: Optional[SyntheticGraph] = None) -> QueryPlan:
        if len(self.handoffs) not in (0, len(self.phases) - 1):
            raise ValueError(f"{len(self.phases)} phases need {len(self.phases) - 1} handoff groups")
        plan = QueryPlan()
        for accesses in self.phases:
            plan.phases.append(np.sort(np.asarray(accesses, dtype=np.int64)))
            plan.edges.append(0)
        for i in range(len(self.phases) - 1):
            pairs = self.handoffs[i] if self.handoffs else ()
            arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
            plan.boundaries.append(_distinct_pairs(arr[:, 0], arr[:, 1]))
        return plan


def make_workload(
    graph: SyntheticGraph,
    kind: str,
    count: int,
    seed: int,
    max_phases: int = 10
) -> List:
    """
    Seeded query list.

    `bfs` draws roots from the largest component of the first layer;
    `twohop` draws users with at least one `follows` edge.
    """
    rng = np.random.default_rng(seed)
    if kind == "bfs":
        pool = graph.largest_component()
        roots = rng.choice(pool, size=count, replace=True)
        return [BfsQuery(int(r), max_phases) for r in roots]
    if kind == "twohop":
        degrees = np.diff(graph.layers["follows"].indptr)
        pool = np.flatnonzero(degrees > 0)
        users = rng.choice(pool, size=count, replace=True)
        return [TwoHopQuery(int(u)) for u in users]
    raise ValueError(f"Unknown workload kind '{kind}', expected 'bfs' or 'twohop'")
