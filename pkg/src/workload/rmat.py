"""
R-MAT cell sampling.

Each sample picks one of the four quadrants with probabilities p0..p3 and
recurses `depth` times, most significant bit first.
"""
from typing import Optional, Tuple
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)

# Graph500 generator defaults
GRAPH500_P = (0.57, 0.19, 0.19, 0.05)

# distributions of the compression-error experiments
ERROR_DISTRIBUTIONS = {
    "near-uniform": (0.30, 0.25, 0.25, 0.20),
    "intermediate": (0.45, 0.25, 0.25, 0.05),
    "skewed": (0.9, 0.09, 0.009, 0.001),
}


class RmatParams(BaseModel):
    """Quadrant probabilities, recursion depth and seed of an R-MAT stream."""

    model_config = ConfigDict(frozen=True)

    p: Tuple[float, float, float, float]
    depth: int = Field(ge=0, description="log2 of the matrix side")
    seed: int = 0

    @field_validator("p")
    @classmethod
    def _check_probabilities(cls, p):
        if any(x <= 0 for x in p):
            raise ValueError(f"All quadrant probabilities must be positive, got {p}")
        if abs(sum(p) - 1.0) > 1e-12:
            raise ValueError(f"Quadrant probabilities must sum to 1, got {sum(p)!r}")
        return p

    @property
    def side(self) -> int:
        return 1 << self.depth


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator used by every experiment."""
    return np.random.default_rng(seed)


def rmat_sample_cells(
    params: RmatParams,
    n: int,
    rng: Optional[np.random.Generator] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw `n` cells of the 2^depth x 2^depth matrix.

    Args:
        params: Distribution and depth
        n: Number of cells
        rng: Generator state; a fresh one seeded from params when omitted

    Returns:
        (rows, cols) int64 arrays
    """
    if rng is None:
        rng = make_rng(params.seed)
    rows = np.zeros(n, dtype=np.int64)
    cols = np.zeros(n, dtype=np.int64)
    p = np.asarray(params.p, dtype=np.float64)
    p = p / p.sum()
    for _ in range(params.depth):
        quadrant = rng.choice(4, size=n, p=p)
        rows = (rows << 1) | (quadrant >> 1)
        cols = (cols << 1) | (quadrant & 1)
    return rows, cols


def rmat_sample_cell(params: RmatParams, rng: np.random.Generator) -> Tuple[int, int]:
    """Draw a single cell."""
    rows, cols = rmat_sample_cells(params, 1, rng)
    return int(rows[0]), int(cols[0])
