"""DN-tree configuration: thresholds and matrix geometry."""
import math
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

# Saturation thresholds are clipped here so they always fit an int64 counter.
MAX_THRESHOLD = 2 ** 62


class DnTreeConfig(BaseModel):
    """
    Parameters of a DN-tree.

    A counter at level `i` saturates at ceil(t * k**i). The matrix side is the
    extent space padded to a power of two (at least 2, so the root always has
    four quadrants); padded cells are never accessed.
    """

    model_config = ConfigDict(frozen=True)

    base_threshold: int = Field(ge=0, description="t, threshold base")
    growth_factor: float = Field(ge=1.0, description="k, threshold growth per level")
    extent_space: int = Field(ge=1, description="m, number of extents")

    @property
    def side(self) -> int:
        """Effective matrix side."""
        return max(2, 1 << (self.extent_space - 1).bit_length())

    @property
    def depth(self) -> int:
        """Level of the 1x1 cells (root children are level 1)."""
        return self.side.bit_length() - 1

    def threshold(self, level: int) -> int:
        """Saturation count of a counter at `level`."""
        # k is taken at its shortest decimal form, so 16 * 1.1**2 is exactly 19.36
        exact = self.base_threshold * Fraction(repr(self.growth_factor)) ** level
        return min(math.ceil(exact), MAX_THRESHOLD)

    def thresholds(self) -> np.ndarray:
        """Thresholds indexed by level; index 0 (root) is unused."""
        caps = np.zeros(self.depth + 1, dtype=np.int64)
        for level in range(1, self.depth + 1):
            caps[level] = self.threshold(level)
        return caps

    def block_size(self, level: int) -> int:
        """Side of the square region covered by a node at `level`."""
        return self.side >> level
