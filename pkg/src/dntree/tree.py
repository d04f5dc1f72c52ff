"""
DN-tree: a lossy quadtree summary of the extent transition matrix.

Cell (a, b) of the m x m matrix M counts how often extent b was accessed right
after extent a. The tree keeps one counter per quadrant; once a counter
reaches its level threshold further updates descend into four lazily created
children, so detail is kept only where accesses are dense.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from src.dntree.config import DnTreeConfig
from src.dntree.kernels import preorder, record_transitions
from src.errors import ExtentRangeError, ReadOnlyTreeError

logger = logging.getLogger(__name__)

# counts, first_child and levels are three int64 arrays
NODE_BYTES = 24

_INITIAL_CAPACITY = 64

Number = Union[float, Fraction]


@dataclass(frozen=True)
class TreeStats:
    """Size figures of a DN-tree."""
    node_count: int
    total_recorded: int
    memory_estimate: int
    depth: int
    matrix_fraction: float


@dataclass(frozen=True)
class DnNode:
    """Read-only view of one counter of a DN-tree."""
    tree: "DnTree"
    index: int

    @property
    def count(self) -> int:
        return int(self.tree._counts[self.index])

    @property
    def level(self) -> int:
        return int(self.tree._levels[self.index])

    @property
    def children(self) -> Optional[Tuple["DnNode", ...]]:
        fc = int(self.tree._first_child[self.index])
        if fc < 0:
            return None
        return tuple(DnNode(self.tree, fc + q) for q in range(4))

    @property
    def is_leaf(self) -> bool:
        return self.tree._first_child[self.index] < 0


class DnTree:
    """
    Mutable DN-tree (single writer).

    The root holds no counter; `root_children` are the four level-1 quadrants.
    """

    def __init__(self, config: DnTreeConfig, capacity: int = _INITIAL_CAPACITY):
        """
        Initialize an empty tree.

        Args:
            config: Thresholds and extent space
            capacity: Initial node slots (grown on demand)
        """
        self.config = config
        capacity = max(4, int(capacity))
        self._counts = np.zeros(capacity, dtype=np.int64)
        self._first_child = np.full(capacity, -1, dtype=np.int64)
        self._levels = np.zeros(capacity, dtype=np.int64)
        self._levels[:4] = 1
        self._size = 4
        self._caps = config.thresholds()
        self.total_recorded = 0
        self.read_only = False

    # ------------------------------------------------------------------
    # structure access

    @property
    def node_count(self) -> int:
        return self._size

    @property
    def root_children(self) -> Tuple[DnNode, ...]:
        return tuple(DnNode(self, q) for q in range(4))

    def counter_sum(self) -> int:
        """Sum of all counters (equals total_recorded for recorded trees)."""
        return int(self._counts[:self._size].sum())

    def preorder(self) -> np.ndarray:
        """Node indices in serialization order."""
        return preorder(self._first_child, self._size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DnTree):
            return NotImplemented
        if self.config != other.config or self._size != other._size:
            return False
        if self.total_recorded != other.total_recorded:
            return False
        mine, theirs = self.preorder(), other.preorder()
        return (
            np.array_equal(self._counts[mine], other._counts[theirs])
            and np.array_equal(self._first_child[mine] >= 0, other._first_child[theirs] >= 0)
        )

    def __repr__(self) -> str:
        return (
            f"DnTree(nodes={self._size}, total={self.total_recorded}, "
            f"t={self.config.base_threshold}, k={self.config.growth_factor}, "
            f"m={self.config.extent_space})"
        )

    # ------------------------------------------------------------------
    # updates

    def record(self, prev: int, next_: int) -> None:
        """Record one transition prev -> next_."""
        self.record_many(np.array([prev], dtype=np.int64), np.array([next_], dtype=np.int64))

    def record_many(self, rows: Sequence[int], cols: Sequence[int]) -> None:
        """
        Record transitions rows[i] -> cols[i] in order.

        Args:
            rows: Previously accessed extents
            cols: Next accessed extents

        Raises:
            ExtentRangeError: If any id is outside the extent space
            ReadOnlyTreeError: If the tree came out of a join
        """
        if self.read_only:
            raise ReadOnlyTreeError("Joined DN-trees are read-only")
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        cols = np.ascontiguousarray(cols, dtype=np.int64)
        if rows.shape != cols.shape or rows.ndim != 1:
            raise ValueError(f"rows and cols must be 1-d of equal length, got {rows.shape} and {cols.shape}")
        if rows.size == 0:
            return
        self._check_range(rows)
        self._check_range(cols)

        done = 0
        while True:
            done, size = record_transitions(
                self._counts, self._first_child, self._levels, self._caps,
                rows, cols, done, self._size, self.config.depth
            )
            self._size = int(size)
            if done >= rows.size:
                break
            self._grow()
        self.total_recorded += int(rows.size)

    def _check_range(self, ids: np.ndarray) -> None:
        bad = (ids < 0) | (ids >= self.config.extent_space)
        if bad.any():
            raise ExtentRangeError(int(ids[np.argmax(bad)]), self.config.extent_space)

    def _grow(self) -> None:
        capacity = self._counts.size * 2
        logger.debug(f"Growing DN-tree arrays to {capacity} slots")
        for name, fill in (("_counts", 0), ("_first_child", -1), ("_levels", 0)):
            old = getattr(self, name)
            new = np.full(capacity, fill, dtype=np.int64)
            new[:old.size] = old
            setattr(self, name, new)

    # ------------------------------------------------------------------
    # reconstruction

    def _geometry(self) -> Tuple[np.ndarray, np.ndarray]:
        """Top-left cell (row0, col0) of every node."""
        size = self._size
        fc = self._first_child[:size]
        levels = self._levels[:size]
        row0 = np.zeros(size, dtype=np.int64)
        col0 = np.zeros(size, dtype=np.int64)
        half = self.config.side >> 1
        quad = np.arange(4)
        row0[:4] = (quad >> 1) * half
        col0[:4] = (quad & 1) * half
        for level in range(1, self.config.depth):
            parents = np.flatnonzero((levels == level) & (fc >= 0))
            if parents.size == 0:
                break
            child_half = self.config.side >> (level + 1)
            kids = fc[parents][:, None] + quad
            row0[kids] = row0[parents][:, None] + (quad >> 1) * child_half
            col0[kids] = col0[parents][:, None] + (quad & 1) * child_half
        return row0, col0

    def _valid_cells(self, row0: np.ndarray, col0: np.ndarray, levels: np.ndarray) -> np.ndarray:
        """Number of non-padded cells under each node."""
        m = self.config.extent_space
        block = self.config.side >> levels
        rows = np.clip(m - row0, 0, block)
        cols = np.clip(m - col0, 0, block)
        return rows * cols

    def _masses(self) -> np.ndarray:
        """
        Reconstructed mass of every node.

        A root child starts with its own counter. A child receives its
        parent's mass weighted by its share of the children's counters,
        plus its own counter. Masses of leaves sum to the counter total.
        """
        size = self._size
        counts = self._counts[:size].astype(np.float64)
        fc = self._first_child[:size]
        levels = self._levels[:size]
        row0, col0 = self._geometry()
        valid = self._valid_cells(row0, col0, levels) > 0

        mass = np.zeros(size, dtype=np.float64)
        mass[:4] = counts[:4]
        quad = np.arange(4)
        for level in range(1, self.config.depth):
            parents = np.flatnonzero((levels == level) & (fc >= 0))
            if parents.size == 0:
                break
            kids = fc[parents][:, None] + quad
            c = counts[kids]
            child_sum = c.sum(axis=1)
            parent_mass = mass[parents][:, None]
            kid_valid = valid[kids]
            n_valid = np.maximum(kid_valid.sum(axis=1), 1)[:, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                weighted = np.where(
                    child_sum[:, None] > 0,
                    parent_mass * c / child_sum[:, None],
                    np.where(kid_valid, parent_mass / n_valid, 0.0),
                )
            mass[kids] = weighted + c
        return mass

    def _exact_masses(self) -> List[Fraction]:
        size = self._size
        counts = [int(c) for c in self._counts[:size]]
        fc = self._first_child[:size]
        levels = self._levels[:size]
        row0, col0 = self._geometry()
        valid = self._valid_cells(row0, col0, levels) > 0

        mass = [Fraction(0)] * size
        for q in range(4):
            mass[q] = Fraction(counts[q])
        # children always have larger indices than their parent
        for node in range(size):
            first = int(fc[node])
            if first < 0:
                continue
            kids = range(first, first + 4)
            child_sum = sum(counts[k] for k in kids)
            n_valid = max(1, sum(1 for k in kids if valid[k]))
            for k in kids:
                if child_sum > 0:
                    share = mass[node] * counts[k] / child_sum
                else:
                    share = mass[node] / n_valid if valid[k] else Fraction(0)
                mass[k] = share + counts[k]
        return mass

    def reconstruct_matrix(self, exact: bool = False) -> np.ndarray:
        """
        Approximate transition matrix M_hat (extent_space x extent_space).

        Args:
            exact: Return Fraction cells (object array) instead of float64

        Returns:
            Unrounded reconstruction; its sum equals total_recorded
        """
        m = self.config.extent_space
        size = self._size
        levels = self._levels[:size]
        leaves = np.flatnonzero(self._first_child[:size] < 0)
        row0, col0 = self._geometry()
        n_cells = self._valid_cells(row0, col0, levels)

        if exact:
            masses = self._exact_masses()
            matrix = np.empty((m, m), dtype=object)
            matrix.fill(Fraction(0))
            for leaf in leaves:
                cells = int(n_cells[leaf])
                if cells == 0 or masses[leaf] == 0:
                    continue
                density = masses[leaf] / cells
                block = self.config.side >> int(levels[leaf])
                r, c = int(row0[leaf]), int(col0[leaf])
                for i in range(r, min(r + block, m)):
                    for j in range(c, min(c + block, m)):
                        matrix[i, j] = density
            return matrix

        masses = self._masses()
        matrix = np.zeros((m, m), dtype=np.float64)
        leaves = leaves[(n_cells[leaves] > 0) & (masses[leaves] != 0)]
        cells = leaves[levels[leaves] == self.config.depth]
        matrix[row0[cells], col0[cells]] = masses[cells]
        for leaf in leaves[levels[leaves] < self.config.depth]:
            block = self.config.side >> int(levels[leaf])
            r, c = int(row0[leaf]), int(col0[leaf])
            matrix[r:r + block, c:c + block] = masses[leaf] / n_cells[leaf]
        return matrix

    def rounded_matrix(self) -> np.ndarray:
        """Reconstruction rounded half-up to integers (display and golden checks)."""
        return np.floor(self.reconstruct_matrix() + 0.5).astype(np.int64)

    def reconstruct_cell(self, i: int, j: int, exact: bool = False) -> Number:
        """
        Approximate M_hat(i, j) by descending from the root child covering (i, j).

        Raises:
            ExtentRangeError: If i or j is outside the extent space
        """
        m = self.config.extent_space
        for idx in (i, j):
            if not 0 <= idx < m:
                raise ExtentRangeError(idx, m)
        depth = self.config.depth
        number = Fraction if exact else float

        shift = depth - 1
        node = ((i >> shift) & 1) * 2 + ((j >> shift) & 1)
        value = number(int(self._counts[node]))
        level = 1
        row0 = ((i >> shift) & 1) << shift
        col0 = ((j >> shift) & 1) << shift
        while self._first_child[node] >= 0:
            first = int(self._first_child[node])
            shift -= 1
            q = ((i >> shift) & 1) * 2 + ((j >> shift) & 1)
            child = first + q
            child_sum = int(self._counts[first:first + 4].sum())
            count = int(self._counts[child])
            if child_sum > 0:
                value = value * count / child_sum + count
            else:
                n_valid = 0
                for k in range(4):
                    r = row0 + ((k >> 1) << shift)
                    c = col0 + ((k & 1) << shift)
                    if r < m and c < m:
                        n_valid += 1
                value = value / max(n_valid, 1) + count
            row0 += (q >> 1) << shift
            col0 += (q & 1) << shift
            node = child
            level += 1
        block = 1 << (depth - level)
        cells = min(block, m - row0) * min(block, m - col0)
        return value / cells if cells > 1 else value

    # ------------------------------------------------------------------
    # size

    def stats(self) -> TreeStats:
        """Node count (root excluded), records and memory estimate."""
        memory = self._size * NODE_BYTES
        dense = self.config.extent_space ** 2 * 8
        return TreeStats(
            node_count=self._size,
            total_recorded=self.total_recorded,
            memory_estimate=memory,
            depth=self.config.depth,
            matrix_fraction=memory / dense,
        )
