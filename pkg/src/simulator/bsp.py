"""
Bulk-synchronous execution of one query over a distribution function.

Cost model: every extent access costs `unit_compute_cost` on the node that
owns the extent (scaled by the cache factor when the extent was resident on
that node during the previous execution); a phase lasts as long as its
slowest node. Every distinct extent handoff between two nodes costs
`unit_net_cost` at the phase boundary and is charged to the receiving node.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import logging

import numpy as np

from src.dntree import DnTree
from src.errors import DimensionMismatchError
from src.partitioner import DistributionFunction

logger = logging.getLogger(__name__)


@dataclass
class BspTrace:
    """
    Per-phase node loads and costs of one query.

    `net_in[p]` holds the units each node received at the boundary entering
    phase p, so `net_in[0]` is always zero.
    """
    num_nodes: int
    loads: List[np.ndarray] = field(default_factory=list)
    costs: List[np.ndarray] = field(default_factory=list)
    net_in: List[np.ndarray] = field(default_factory=list)
    edges_traversed: int = 0
    unit_net_cost: float = 1.0
    resident: Optional[np.ndarray] = None

    @property
    def num_phases(self) -> int:
        return len(self.loads)

    @property
    def total_load(self) -> int:
        return int(sum(int(l.sum()) for l in self.loads))

    @property
    def network_units(self) -> int:
        """Cross-node handoffs over all boundaries."""
        return int(sum(int(n.sum()) for n in self.net_in))

    @property
    def compute_time(self) -> float:
        return float(sum(c.max() for c in self.costs)) if self.costs else 0.0

    @property
    def makespan(self) -> float:
        return self.compute_time + self.unit_net_cost * self.network_units


def _record_phase(
    trees: Sequence[DnTree],
    owner: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
    freeze_after: Optional[int]
) -> None:
    for node, tree in enumerate(trees):
        mine = owner == node
        if not mine.any():
            continue
        r, c = rows[mine], cols[mine]
        if freeze_after is not None:
            room = max(0, freeze_after - tree.total_recorded)
            r, c = r[:room], c[:room]
        tree.record_many(r, c)


def run_query_bsp(
    graph,
    df: DistributionFunction,
    query,
    recorders: Optional[Sequence[DnTree]] = None,
    residency: Optional[np.ndarray] = None,
    cache_factor: float = 1.0,
    unit_compute_cost: float = 1.0,
    unit_net_cost: float = 1.0,
    freeze_after: Optional[int] = None
) -> BspTrace:
    """
    Execute `query` phase by phase.

    Args:
        graph: SyntheticGraph the query runs on (may be None for PhasedQuery)
        df: Extent -> node map
        query: BfsQuery, TwoHopQuery or PhasedQuery
        recorders: One DN-tree per node, or None to skip recording
        residency: Bool (extent, node) matrix of the previous execution
        cache_factor: Cost multiplier for resident extents
        unit_compute_cost: Cost of one extent access
        unit_net_cost: Cost of one cross-node handoff
        freeze_after: Stop recording on a tree once it holds this many records

    Returns:
        BspTrace with `resident` set to the (extent, node) pairs touched
    """
    n_nodes = df.num_nodes
    if recorders is not None and len(recorders) != n_nodes:
        raise DimensionMismatchError(f"{len(recorders)} recorders for {n_nodes} nodes")
    if residency is not None and residency.shape != (df.num_extents, n_nodes):
        raise DimensionMismatchError(f"Residency shape {residency.shape} does not match the cluster")

    plan = query.plan(graph)
    trace = BspTrace(n_nodes, edges_traversed=plan.edges_traversed, unit_net_cost=unit_net_cost)
    touched = np.zeros((df.num_extents, n_nodes), dtype=bool)

    for phase, accesses in enumerate(plan.phases):
        if phase > 0:
            handoffs = plan.boundaries[phase - 1]
            src_node, dst_node = df(handoffs[:, 0]), df(handoffs[:, 1])
            cross = src_node != dst_node
            trace.net_in.append(np.bincount(dst_node[cross], minlength=n_nodes).astype(np.int64))
            if recorders is not None:
                _record_phase(recorders, src_node, handoffs[:, 0], handoffs[:, 1], freeze_after)
        else:
            trace.net_in.append(np.zeros(n_nodes, dtype=np.int64))

        owner = df(accesses)
        unit = np.full(accesses.size, unit_compute_cost, dtype=np.float64)
        if residency is not None:
            unit[residency[accesses, owner]] *= cache_factor
        trace.loads.append(np.bincount(owner, minlength=n_nodes).astype(np.int64))
        trace.costs.append(np.bincount(owner, weights=unit, minlength=n_nodes))
        touched[accesses, owner] = True

        if recorders is not None:
            rows, cols, by = [], [], []
            for node in range(n_nodes):
                local = np.unique(accesses[owner == node])
                if local.size > 1:
                    rows.append(local[:-1])
                    cols.append(local[1:])
                    by.append(np.full(local.size - 1, node, dtype=np.int64))
            if rows:
                _record_phase(recorders, np.concatenate(by), np.concatenate(rows), np.concatenate(cols), freeze_after)

        logger.debug(
            f"Phase {phase}: loads {trace.loads[-1].tolist()}, net_in {trace.net_in[-1].tolist()}"
        )

    trace.resident = touched
    return trace
