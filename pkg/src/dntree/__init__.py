"""DN-tree summary of extent-access transitions."""

from .config import DnTreeConfig
from .tree import DnNode, DnTree, TreeStats, NODE_BYTES
from .codec import SerializedDnTree, serialize, deserialize
from .merge import AggregationResult, join, aggregate

__all__ = [
    'DnTreeConfig',
    'DnNode',
    'DnTree',
    'TreeStats',
    'NODE_BYTES',
    'SerializedDnTree',
    'serialize',
    'deserialize',
    'AggregationResult',
    'join',
    'aggregate',
]
