"""
Exception hierarchy shared by all DYDAP packages.
"""


class DydapError(Exception):
    """Base class for all toolkit errors."""


class ExtentRangeError(DydapError, ValueError):
    """Extent id outside the configured extent space."""

    def __init__(self, extent_id: int, extent_space: int):
        self.extent_id = extent_id
        self.extent_space = extent_space
        super().__init__(f"Extent id {extent_id} outside [0, {extent_space})")


class ConfigMismatchError(DydapError, ValueError):
    """Two DN-trees (or a tree and an encoding) disagree on their config."""


class MalformedEncodingError(DydapError, ValueError):
    """A serialized DN-tree is not a valid preorder encoding."""


class ReadOnlyTreeError(DydapError):
    """Attempt to record into a tree produced by join."""


class EmptyAggregationError(DydapError, ValueError):
    """Aggregation called without any tree."""


class DimensionMismatchError(DydapError, ValueError):
    """Shapes of matrices, graphs, constraints or assignments disagree."""


class InfeasiblePartitionError(DydapError):
    """No assignment satisfies the imbalance tolerances."""


class SearchSpaceTooLargeError(DydapError):
    """Exhaustive partitioning refused because the instance is too large."""


class UnknownVertexError(DydapError, ValueError):
    """Query references a vertex that is not in the graph."""
