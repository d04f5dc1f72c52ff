"""
Compiled inner loops of the DN-tree.

The tree lives in flat arrays: `counts`, `first_child` (index of the first of
four contiguous children, -1 for leaves) and `levels`. Root children occupy
slots 0..3; children of a node are ordered row-low/col-low, row-low/col-high,
row-high/col-low, row-high/col-high.
"""
import logging

import numpy as np

logger = logging.getLogger(__name__)

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False


def _record_transitions(counts, first_child, levels, caps, rows, cols, start, size, depth):
    """
    Apply transitions rows[start:], cols[start:] in order.

    Returns (next_index, size). Stops early when creating children would
    overflow the arrays; the caller grows them and resumes from next_index.
    Nothing is mutated for the transition the kernel stopped at.
    """
    capacity = counts.shape[0]
    n = rows.shape[0]
    i = start
    while i < n:
        a = rows[i]
        b = cols[i]
        shift = depth - 1
        node = ((a >> shift) & 1) * 2 + ((b >> shift) & 1)
        level = 1
        while level < depth and (first_child[node] >= 0 or counts[node] >= caps[level]):
            fc = first_child[node]
            if fc < 0:
                if size + 4 > capacity:
                    return i, size
                fc = size
                for q in range(4):
                    counts[fc + q] = 0
                    first_child[fc + q] = -1
                    levels[fc + q] = level + 1
                first_child[node] = fc
                size += 4
            shift -= 1
            node = fc + ((a >> shift) & 1) * 2 + ((b >> shift) & 1)
            level += 1
        counts[node] += 1
        i += 1
    return i, size


def _preorder(first_child, size):
    """Node indices in preorder, starting from the four root children."""
    order = np.empty(size, dtype=np.int64)
    stack = np.empty(size + 4, dtype=np.int64)
    top = 0
    for q in range(3, -1, -1):
        stack[top] = q
        top += 1
    k = 0
    while top > 0:
        top -= 1
        node = stack[top]
        order[k] = node
        k += 1
        fc = first_child[node]
        if fc >= 0:
            for q in range(3, -1, -1):
                stack[top] = fc + q
                top += 1
    return order[:k]


if NUMBA_AVAILABLE:
    record_transitions = njit(cache=False)(_record_transitions)
    preorder = njit(cache=False)(_preorder)
else:
    logger.warning("numba not installed, DN-tree kernels run in pure Python")
    record_transitions = _record_transitions
    preorder = _preorder
