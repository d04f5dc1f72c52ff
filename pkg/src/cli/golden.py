"""
Reference values of the four-extent worked example.

A 44-access sequence over extents 0..3 is summarised with t = 4, k = 1.
The values below are the exact transition matrix, its rounded DN-tree
reconstruction, the symmetrised access graph and the edge cuts of the three
balanced two-way splits.
"""
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.dntree import DnTree, DnTreeConfig
from src.partitioner import ExhaustiveEngine, PartitionSpec, build_access_graph, build_constraints
from src.partitioner.metrics import cut_weight
from src.workload import empty_oracle, replay

GOLDEN_SEQUENCE: List[int] = [
    1, 2, 1, 3, 0, 1, 3, 1, 0, 1, 0, 2, 1, 3, 1, 3, 0, 2, 1, 0, 2, 1,
    3, 0, 3, 0, 1, 0, 1, 3, 1, 3, 1, 2, 0, 1, 3, 1, 3, 1, 2, 1, 2, 1,
]

GOLDEN_T = 4
GOLDEN_K = 1.0
GOLDEN_EXTENTS = 4
GOLDEN_PARTS = 2

GOLDEN_M = np.array([
    [0, 5, 3, 1],
    [4, 0, 4, 9],
    [1, 6, 0, 0],
    [4, 6, 0, 0],
], dtype=np.int64)

GOLDEN_M_HAT = np.array([
    [0, 5, 3, 1],
    [4, 0, 4, 9],
    [1, 5, 0, 0],
    [4, 7, 0, 0],
], dtype=np.int64)

GOLDEN_ADJACENCY = np.array([
    [0, 9, 4, 5],
    [9, 0, 10, 15],
    [4, 10, 0, 0],
    [5, 15, 0, 0],
], dtype=np.int64)

# balanced splits, named by the part holding extent 0
GOLDEN_SPLITS: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = [
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
]

GOLDEN_CUTS: Dict[str, List[int]] = {
    "M": [34, 24, 28],
    "M_hat": [34, 23, 29],
}

GOLDEN_OPTIMUM = ((0, 2), (1, 3))


def _split_assignment(split: Tuple[Tuple[int, ...], Tuple[int, ...]]) -> np.ndarray:
    assignment = np.zeros(GOLDEN_EXTENTS, dtype=np.int64)
    assignment[list(split[1])] = 1
    return assignment


def _diff(name: str, expected: np.ndarray, actual: np.ndarray) -> List[str]:
    if expected.shape != actual.shape:
        return [f"{name}: expected shape {expected.shape}, got {actual.shape}"]
    return [
        f"{name}[{i}][{j}]: expected {int(expected[i, j])}, got {int(actual[i, j])}"
        for i, j in zip(*np.nonzero(expected != actual))
    ]


def golden_report(sequence: Sequence[int]) -> Tuple[dict, List[str]]:
    """
    Replay `sequence` and compare every derived value with the reference.

    Returns:
        (report, mismatches); report values are plain lists and ints,
        mismatches are cell-level messages in check order
    """
    config = DnTreeConfig(base_threshold=GOLDEN_T, growth_factor=GOLDEN_K, extent_space=GOLDEN_EXTENTS)
    tree, oracle = replay(sequence, DnTree(config), empty_oracle(GOLDEN_EXTENTS))
    m_hat = tree.rounded_matrix()
    adjacency = oracle + oracle.T

    uniform = build_constraints(GOLDEN_EXTENTS)
    spec = PartitionSpec(num_parts=GOLDEN_PARTS, tolerance=1.0)
    engine = ExhaustiveEngine()
    cuts, optima = {}, {}
    for name, matrix in (("M", oracle), ("M_hat", m_hat)):
        sym = (matrix + matrix.T).astype(np.float64)
        cuts[name] = [int(round(cut_weight(sym, _split_assignment(s)))) for s in GOLDEN_SPLITS]
        best = engine.partition(build_access_graph(matrix), uniform, spec)
        optima[name] = [list(part) for part in best.parts()]

    mismatches = _diff("M", GOLDEN_M, oracle) + _diff("M_hat", GOLDEN_M_HAT, m_hat)
    mismatches += _diff("adjacency", GOLDEN_ADJACENCY, adjacency)
    for name, expected in GOLDEN_CUTS.items():
        for split, want, got in zip(GOLDEN_SPLITS, expected, cuts[name]):
            if want != got:
                mismatches.append(f"cut[{name}] {split}: expected {want}, got {got}")
    for name, parts in optima.items():
        if parts != [list(p) for p in GOLDEN_OPTIMUM]:
            mismatches.append(f"optimum[{name}]: expected {list(GOLDEN_OPTIMUM)}, got {parts}")

    report = {
        "accesses": len(sequence),
        "transitions": tree.total_recorded,
        "node_count": tree.node_count,
        "M": oracle.tolist(),
        "M_hat": m_hat.tolist(),
        "adjacency": adjacency.tolist(),
        "splits": [[list(a), list(b)] for a, b in GOLDEN_SPLITS],
        "cuts": cuts,
        "optimum": optima,
        "match": not mismatches,
    }
    return report, mismatches
