"""Replay of access sequences into a DN-tree and a dense oracle matrix."""
from pathlib import Path
from typing import List, Sequence, Tuple, Union
import logging

import numpy as np

from src.dntree import DnTree
from src.errors import DimensionMismatchError

logger = logging.getLogger(__name__)


def empty_oracle(extent_space: int) -> np.ndarray:
    """Dense exact transition matrix."""
    return np.zeros((extent_space, extent_space), dtype=np.int64)


def replay_transitions(
    rows: Sequence[int],
    cols: Sequence[int],
    tree: DnTree,
    oracle: np.ndarray
) -> Tuple[DnTree, np.ndarray]:
    """
    Record transitions rows[i] -> cols[i] into both the tree and the oracle.

    Returns:
        The updated (tree, oracle) pair
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    m = tree.config.extent_space
    if oracle.shape != (m, m):
        raise DimensionMismatchError(f"Oracle shape {oracle.shape} does not match extent space {m}")
    # tree validates ids before anything is mutated
    tree.record_many(rows, cols)
    np.add.at(oracle, (rows, cols), 1)
    return tree, oracle


def replay(
    seq: Sequence[int],
    tree: DnTree,
    oracle: np.ndarray
) -> Tuple[DnTree, np.ndarray]:
    """
    Record every consecutive pair of an access sequence.

    Self-transitions are recorded like any other pair, so a sequence of
    length L always adds L - 1 transitions.
    """
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size < 2:
        return tree, oracle
    return replay_transitions(seq[:-1], seq[1:], tree, oracle)


def read_sequence(path: Union[str, Path]) -> List[int]:
    """Read newline-delimited extent ids; blank lines are skipped."""
    ids = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                ids.append(int(line))
            except ValueError as e:
                raise ValueError(f"{path}:{line_no}: not an extent id: {line!r}") from e
    return ids


def write_sequence(path: Union[str, Path], seq: Sequence[int]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for extent in seq:
            f.write(f"{int(extent)}\n")
