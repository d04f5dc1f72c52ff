"""Exhaustive HMCPP solver for small instances (the optimality oracle)."""
from typing import Optional, Sequence
import logging

import numpy as np

from config.settings import settings
from src.errors import InfeasiblePartitionError, SearchSpaceTooLargeError
from src.partitioner.engines.base import BaseEngine
from src.partitioner.graph import AccessGraph, ConstraintMatrix
from src.partitioner.metrics import FEASIBILITY_EPS, PartitionSpec, Partitioning

logger = logging.getLogger(__name__)

_CHUNK = 1 << 16
_TIE_EPS = 1e-9


class ExhaustiveEngine(BaseEngine):
    """
    Enumerate every assignment with vertex 0 pinned to part 0.

    Assignments are visited in lexicographic order and the first one reaching
    the minimum cut wins, which makes the result canonical under relabeling.
    """

    name = "exhaustive"

    def __init__(self, seed: int = 42, limit: Optional[int] = None):
        super().__init__(seed)
        self.limit = settings.EXHAUSTIVE_LIMIT if limit is None else limit

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
        if n == 0:
            return Partitioning(np.zeros(0, dtype=np.int64), parts)

        free = n - 1
        space = parts ** free
        if space > self.limit:
            raise SearchSpaceTooLargeError(
                f"{parts}^{free} = {space} assignments exceed the limit of {self.limit}"
            )

        u, v, w = graph.edges()
        cw = constraints.weights
        powers = parts ** np.arange(free - 1, -1, -1, dtype=np.int64)

        best_cut = np.inf
        best_row = None
        for start in range(0, space, _CHUNK):
            ks = np.arange(start, min(start + _CHUNK, space), dtype=np.int64)
            rows = np.zeros((ks.size, n), dtype=np.int64)
            if free:
                rows[:, 1:] = (ks[:, None] // powers[None, :]) % parts

            cuts = (rows[:, u] != rows[:, v]).astype(np.float64) @ w if w.size else np.zeros(ks.size)
            worst = np.zeros((ks.size, cw.shape[1]), dtype=np.float64)
            for j in range(parts):
                worst = np.maximum(worst, (rows == j).astype(np.float64) @ cw)
            feasible = np.all(parts * worst <= tol + FEASIBILITY_EPS, axis=1)
            if not feasible.any():
                continue
            cuts = np.where(feasible, cuts, np.inf)
            low = cuts.min()
            scale = _TIE_EPS * max(1.0, abs(low))
            idx = int(np.flatnonzero(cuts <= low + scale)[0])
            if cuts[idx] < best_cut - scale:
                best_cut = float(cuts[idx])
                best_row = rows[idx].copy()

        if best_row is None:
            raise InfeasiblePartitionError(
                f"No assignment of {n} vertices into {parts} parts meets tolerances {tol.tolist()}"
            )
        logger.debug(f"Exhaustive search over {space} assignments: best cut {best_cut}")
        return Partitioning(best_row, parts)
