"""
Preorder encoding of DN-trees and its binary wire/snapshot format.

Binary layout (little-endian):
    magic "DNT1", extent_space u64, base_threshold u64, growth_factor f64,
    entry_count u64, then entry_count records of {count u64, marker u8}.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union
import logging
import struct

import numpy as np
from pydantic import ValidationError

from src.dntree.config import DnTreeConfig
from src.dntree.tree import DnTree
from src.errors import ConfigMismatchError, MalformedEncodingError

logger = logging.getLogger(__name__)

MAGIC = b"DNT1"
HEADER = struct.Struct("<4sQQdQ")
ENTRY_DTYPE = np.dtype([("count", "<u8"), ("marker", "u1")])


@dataclass
class SerializedDnTree:
    """Preorder list of (count, marker) entries plus the config it was built with."""
    config: DnTreeConfig
    counts: np.ndarray = field(repr=False)
    markers: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.uint64)
        self.markers = np.asarray(self.markers, dtype=bool)
        if self.counts.shape != self.markers.shape or self.counts.ndim != 1:
            raise MalformedEncodingError("counts and markers must be 1-d arrays of equal length")

    @classmethod
    def from_entries(cls, config: DnTreeConfig, entries: Iterable[Tuple[int, bool]]) -> "SerializedDnTree":
        entries = list(entries)
        counts = np.array([c for c, _ in entries], dtype=np.uint64)
        markers = np.array([bool(mk) for _, mk in entries], dtype=bool)
        return cls(config, counts, markers)

    @property
    def entries(self) -> List[Tuple[int, bool]]:
        return [(int(c), bool(mk)) for c, mk in zip(self.counts, self.markers)]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __len__(self) -> int:
        return int(self.counts.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SerializedDnTree):
            return NotImplemented
        return (
            self.config == other.config
            and np.array_equal(self.counts, other.counts)
            and np.array_equal(self.markers, other.markers)
        )

    def to_bytes(self) -> bytes:
        header = HEADER.pack(
            MAGIC,
            self.config.extent_space,
            self.config.base_threshold,
            float(self.config.growth_factor),
            len(self),
        )
        body = np.empty(len(self), dtype=ENTRY_DTYPE)
        body["count"] = self.counts
        body["marker"] = self.markers
        return header + body.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SerializedDnTree":
        if len(data) < HEADER.size:
            raise MalformedEncodingError(f"Snapshot too short: {len(data)} bytes")
        magic, extent_space, base_threshold, growth_factor, n = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise MalformedEncodingError(f"Bad magic {magic!r}")
        expected = HEADER.size + n * ENTRY_DTYPE.itemsize
        if len(data) != expected:
            raise MalformedEncodingError(f"Snapshot holds {len(data)} bytes, header announces {expected}")
        try:
            config = DnTreeConfig(
                base_threshold=base_threshold,
                growth_factor=growth_factor,
                extent_space=extent_space,
            )
        except ValidationError as e:
            raise MalformedEncodingError(f"Invalid config in snapshot: {e}") from e
        body = np.frombuffer(data, dtype=ENTRY_DTYPE, count=n, offset=HEADER.size)
        if (body["marker"] > 1).any():
            raise MalformedEncodingError("Marker byte must be 0 or 1")
        return cls(config, body["count"].copy(), body["marker"].astype(bool))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SerializedDnTree":
        return cls.from_bytes(Path(path).read_bytes())


def serialize(tree: DnTree) -> SerializedDnTree:
    """Preorder list of the tree; root children first, fixed quadrant order."""
    order = tree.preorder()
    return SerializedDnTree(
        tree.config,
        tree._counts[order].astype(np.uint64),
        tree._first_child[order] >= 0,
    )


def subtree_ends(encoded: SerializedDnTree) -> np.ndarray:
    """
    For every entry, the index one past its subtree.

    Raises:
        MalformedEncodingError: If the list is truncated, too long, or has
            children below the maximum depth
    """
    markers = encoded.markers
    n = markers.size
    depth = encoded.config.depth
    ends = np.empty(n, dtype=np.int64)

    def walk(pos: int, level: int) -> int:
        if pos >= n:
            raise MalformedEncodingError(f"Encoding truncated at entry {pos}")
        end = pos + 1
        if markers[pos]:
            if level >= depth:
                raise MalformedEncodingError(f"Entry {pos} has children at maximum depth {depth}")
            for _ in range(4):
                end = walk(end, level + 1)
        ends[pos] = end
        return end

    pos = 0
    for _ in range(4):
        pos = walk(pos, 1)
    if pos != n:
        raise MalformedEncodingError(f"{n - pos} trailing entries after the root children")
    return ends


def deserialize(encoded: SerializedDnTree, config: Optional[DnTreeConfig] = None) -> DnTree:
    """
    Rebuild a DnTree from its preorder encoding.

    Args:
        encoded: Preorder encoding
        config: Expected config; mismatch is rejected

    Returns:
        Tree equal to the serialized one. Trees whose counters exceed
        saturation (join results) come back read-only.
    """
    if config is not None and config != encoded.config:
        raise ConfigMismatchError(f"Encoding config {encoded.config} differs from expected {config}")
    subtree_ends(encoded)

    cfg = encoded.config
    n = len(encoded)
    tree = DnTree(cfg, capacity=n)
    counts = encoded.counts
    if n and int(counts.max()) >= 2 ** 63:
        raise MalformedEncodingError("Counter does not fit a signed 64-bit integer")

    stack = [(q, 1) for q in (3, 2, 1, 0)]
    pos = 0
    size = 4
    while stack:
        slot, level = stack.pop()
        tree._counts[slot] = int(counts[pos])
        if encoded.markers[pos]:
            first = size
            size += 4
            tree._first_child[slot] = first
            tree._levels[first:first + 4] = level + 1
            stack.extend((first + q, level + 1) for q in (3, 2, 1, 0))
        pos += 1
    tree._size = size
    tree.total_recorded = tree.counter_sum()
    tree.read_only = _exceeds_saturation(tree)
    return tree


def _exceeds_saturation(tree: DnTree) -> bool:
    """True when the tree could not have been produced by records alone."""
    size = tree.node_count
    levels = tree._levels[:size]
    counts = tree._counts[:size]
    inner = levels < tree.config.depth
    caps = tree._caps[levels]
    over = inner & (counts > caps)
    split_unsaturated = inner & (tree._first_child[:size] >= 0) & (counts != caps)
    return bool(over.any() or split_unsaturated.any())
