"""
Greedy multi-constraint partitioner.

Each restart grows num_parts regions from random seeds, always extending the
least loaded part with the unassigned vertex it is most strongly connected
to, then repairs any tolerance violation and refines the cut with
feasibility-preserving vertex moves and pair swaps.
"""
from typing import List, Optional, Sequence
import logging

import numpy as np

from config.settings import settings
from src.errors import InfeasiblePartitionError
from src.partitioner.engines.base import BaseEngine
from src.partitioner.graph import AccessGraph, ConstraintMatrix
from src.partitioner.metrics import (
    FEASIBILITY_EPS,
    PartitionSpec,
    Partitioning,
    canonicalize,
    cut_weight,
    part_loads,
)

logger = logging.getLogger(__name__)

# pair swaps need O(n^2 * constraints) memory
SWAP_VERTEX_LIMIT = 1024


class HeuristicEngine(BaseEngine):
    """Seeded region growing plus boundary refinement."""

    name = "heuristic"

    def __init__(
        self,
        seed: int = 42,
        restarts: Optional[int] = None,
        max_passes: Optional[int] = None
    ):
        """
        Initialize engine.

        Args:
            seed: Random seed; equal seeds give identical partitionings
            restarts: Independent region-growing starts
            max_passes: Cap on refinement passes per start
        """
        super().__init__(seed)
        self.restarts = settings.HEURISTIC_RESTARTS if restarts is None else restarts
        self.max_passes = settings.REFINEMENT_PASSES if max_passes is None else max_passes

    def partition(
        self,
        graph: AccessGraph,
        constraints: ConstraintMatrix,
        spec: PartitionSpec,
        warm_starts: Optional[Sequence[np.ndarray]] = None
    ) -> Partitioning:
        tol = self.check_instance(graph, constraints, spec)
        n = graph.num_vertices
        parts = spec.num_parts
        if n == 0 or parts == 1:
            return Partitioning(np.zeros(n, dtype=np.int64), parts)

        weights = graph.weights
        cw = constraints.weights
        caps = tol / parts
        rng = np.random.default_rng(self.seed)

        starts: List[Optional[np.ndarray]] = []
        for start in warm_starts or []:
            start = np.asarray(start, dtype=np.int64)
            if start.shape != (n,) or start.min() < 0 or start.max() >= parts:
                logger.warning(f"Ignoring warm start of shape {start.shape} for {n} vertices / {parts} parts")
                continue
            starts.append(start.copy())
        starts.extend([None] * self.restarts)

        best = None
        best_cut = np.inf
        for start in starts:
            assign = self._grow(weights, cw, caps, parts, rng) if start is None else start
            assign = self._repair(weights, cw, caps, parts, assign)
            if assign is None:
                continue
            assign = self._refine(weights, cw, caps, parts, assign)
            assign = canonicalize(assign, parts)
            cut = cut_weight(weights, assign)
            scale = 1e-9 * max(1.0, abs(cut))
            if best is None or cut < best_cut - scale or (
                abs(cut - best_cut) <= scale and tuple(assign) < tuple(best)
            ):
                best, best_cut = assign, cut

        if best is None:
            raise InfeasiblePartitionError(
                f"No feasible partitioning found for {n} vertices into {parts} parts "
                f"with tolerances {tol.tolist()} after {len(starts)} starts"
            )
        logger.debug(f"Heuristic partitioning: cut {best_cut:.3f} over {len(starts)} starts")
        return Partitioning(best, parts)

    # ------------------------------------------------------------------

    @staticmethod
    def _grow(weights, cw, caps, parts, rng) -> np.ndarray:
        n = weights.shape[0]
        assign = np.full(n, -1, dtype=np.int64)
        loads = np.zeros((parts, cw.shape[1]))
        conn = np.zeros((parts, n))
        rank = np.empty(n, dtype=np.int64)
        rank[rng.permutation(n)] = np.arange(n)
        open_parts = np.ones(parts, dtype=bool)
        limit = caps + FEASIBILITY_EPS

        remaining = n
        while remaining and open_parts.any():
            relative = np.max(loads / caps, axis=1)
            relative[~open_parts] = np.inf
            j = int(np.argmin(relative))
            fits = (assign < 0) & np.all(loads[j] + cw <= limit, axis=1)
            candidates = np.flatnonzero(fits)
            if candidates.size == 0:
                open_parts[j] = False
                continue
            # strongest connection first, random rank breaks ties
            v = int(candidates[np.lexsort((rank[candidates], -conn[j, candidates]))[0]])
            assign[v] = j
            loads[j] += cw[v]
            conn[j] += weights[v]
            remaining -= 1

        for v in np.flatnonzero(assign < 0)[np.argsort(rank[assign < 0])]:
            j = int(np.argmin(np.max((loads + cw[v]) / caps, axis=1)))
            assign[v] = j
            loads[j] += cw[v]
        return assign

    @staticmethod
    def _repair(weights, cw, caps, parts, assign) -> Optional[np.ndarray]:
        """Move or swap vertices until no tolerance is exceeded; None if stuck."""
        n = weights.shape[0]
        assign = assign.copy()
        idx = np.arange(n)

        def violation(loads):
            return np.maximum(loads - caps, 0.0).sum(axis=-1)

        for _ in range(4 * n):
            loads = part_loads(cw, assign, parts)
            per_part = violation(loads)
            if per_part.sum() <= FEASIBILITY_EPS:
                return assign

            own = loads[assign]
            conn = np.zeros((parts, n))
            for j in range(parts):
                conn[j] = weights[:, assign == j].sum(axis=1)
            gain = conn.T - conn[assign, idx][:, None]

            # single moves v: a -> b
            leave = violation(own - cw) - per_part[assign]
            enter = violation(loads[None, :, :] + cw[:, None, :]) - per_part[None, :]
            delta = leave[:, None] + enter
            delta[idx, assign] = np.inf
            low = delta.min()
            if low < -FEASIBILITY_EPS:
                ties = delta <= low + FEASIBILITY_EPS
                score = np.where(ties, gain, -np.inf)
                v, b = np.unravel_index(int(np.argmax(score)), score.shape)
                assign[v] = b
                continue

            if n > SWAP_VERTEX_LIMIT:
                return None
            # swaps u <-> v between different parts
            new_a = own[:, None, :] - cw[:, None, :] + cw[None, :, :]
            vio_a = violation(new_a)
            delta = vio_a + vio_a.T - per_part[assign][:, None] - per_part[assign][None, :]
            delta[assign[:, None] == assign[None, :]] = np.inf
            low = delta.min()
            if low < -FEASIBILITY_EPS:
                u, v = np.unravel_index(int(np.argmin(delta)), delta.shape)
                assign[u], assign[v] = assign[v], assign[u]
                continue
            return None
        return None

    def _refine(self, weights, cw, caps, parts, assign) -> np.ndarray:
        """Apply improving moves, then the best improving swap, per pass."""
        n = weights.shape[0]
        assign = assign.copy()
        idx = np.arange(n)
        limit = caps + FEASIBILITY_EPS
        loads = part_loads(cw, assign, parts)
        onehot = np.zeros((n, parts))
        onehot[idx, assign] = 1.0
        conn = onehot.T @ weights
        gain_eps = 1e-12 * max(1.0, weights.sum())

        for _ in range(self.max_passes):
            changed = False
            while True:
                gains = conn.T - conn[assign, idx][:, None]
                gains[idx, assign] = -np.inf
                fits = np.all(loads[None, :, :] + cw[:, None, :] <= limit, axis=2)
                gains[~fits] = -np.inf
                v, b = np.unravel_index(int(np.argmax(gains)), gains.shape)
                if gains[v, b] <= gain_eps:
                    break
                a = assign[v]
                loads[a] -= cw[v]
                loads[b] += cw[v]
                conn[a] -= weights[v]
                conn[b] += weights[v]
                assign[v] = b
                changed = True

            if n <= SWAP_VERTEX_LIMIT:
                move_gain = conn.T - conn[assign, idx][:, None]
                toward = move_gain[:, assign]
                swap_gain = toward + toward.T - 2.0 * weights
                new_a = loads[assign][:, None, :] - cw[:, None, :] + cw[None, :, :]
                ok = np.all(new_a <= limit, axis=2)
                ok &= ok.T
                ok &= assign[:, None] != assign[None, :]
                swap_gain[~ok] = -np.inf
                u, v = np.unravel_index(int(np.argmax(swap_gain)), swap_gain.shape)
                if swap_gain[u, v] > gain_eps:
                    a, b = assign[u], assign[v]
                    loads[a] += cw[v] - cw[u]
                    loads[b] += cw[u] - cw[v]
                    conn[a] += weights[v] - weights[u]
                    conn[b] += weights[u] - weights[v]
                    assign[u], assign[v] = b, a
                    changed = True

            if not changed:
                break
        return assign
