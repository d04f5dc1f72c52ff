"""Join of serialized DN-trees and tree-shaped aggregation across nodes."""
from dataclasses import dataclass
from typing import List, Sequence
import logging

import numpy as np

from src.dntree.codec import SerializedDnTree, subtree_ends
from src.errors import ConfigMismatchError, EmptyAggregationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AggregationResult:
    """Aggregated tree and the number of pairwise joins performed."""
    tree: SerializedDnTree
    joins: int


def join(a: SerializedDnTree, b: SerializedDnTree) -> SerializedDnTree:
    """
    Encoding of the sum of the matrices summarized by `a` and `b`.

    The structure is the union of both trees and coinciding counters are
    added, so the result may hold counters above saturation and is meant to be
    read, not updated. Output is byte-identical for swapped arguments.

    Raises:
        ConfigMismatchError: If the trees were built with different configs
        MalformedEncodingError: If either encoding is not a valid preorder list
    """
    if a.config != b.config:
        raise ConfigMismatchError(f"Cannot join trees with configs {a.config} and {b.config}")
    ends_a = subtree_ends(a)
    ends_b = subtree_ends(b)

    counts: List[int] = []
    markers: List[bool] = []

    def copy_group(src: SerializedDnTree, ends: np.ndarray, pos: int) -> int:
        # four sibling subtrees are contiguous in preorder
        end = pos
        for _ in range(4):
            end = int(ends[end])
        counts.extend(src.counts[pos:end].tolist())
        markers.extend(src.markers[pos:end].tolist())
        return end

    def merge_group(pa: int, pb: int):
        for _ in range(4):
            mark_a = bool(a.markers[pa])
            mark_b = bool(b.markers[pb])
            counts.append(int(a.counts[pa]) + int(b.counts[pb]))
            markers.append(mark_a or mark_b)
            pa += 1
            pb += 1
            if mark_a and mark_b:
                pa, pb = merge_group(pa, pb)
            elif mark_a:
                pa = copy_group(a, ends_a, pa)
            elif mark_b:
                pb = copy_group(b, ends_b, pb)
        return pa, pb

    merge_group(0, 0)
    return SerializedDnTree(
        a.config,
        np.array(counts, dtype=np.uint64),
        np.array(markers, dtype=bool),
    )


def aggregate(trees: Sequence[SerializedDnTree], fanout: int = 2) -> AggregationResult:
    """
    Fold trees with a balanced reduction, as nodes would exchange them.

    Each round groups `fanout` neighbours and joins them into one, so n trees
    always cost exactly n - 1 joins.

    Args:
        trees: Per-node encodings sharing one config
        fanout: Trees merged per group and round

    Returns:
        AggregationResult with the joined tree and the join count
    """
    if not trees:
        raise EmptyAggregationError("Nothing to aggregate")
    if fanout < 2:
        raise ValueError(f"fanout must be at least 2, got {fanout}")

    layer = list(trees)
    joins = 0
    rounds = 0
    while len(layer) > 1:
        merged = []
        for start in range(0, len(layer), fanout):
            group = layer[start:start + fanout]
            acc = group[0]
            for other in group[1:]:
                acc = join(acc, other)
                joins += 1
            merged.append(acc)
        layer = merged
        rounds += 1
    logger.debug(f"Aggregated {len(trees)} DN-trees in {rounds} rounds, {joins} joins")
    return AggregationResult(tree=layer[0], joins=joins)
