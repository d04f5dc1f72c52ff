"""
Growth analysis of the DN-tree.

Under an R-MAT access pattern the tree holds Theta(N^s) nodes after N
accesses, where s solves  sum_i p_i^s = k^s.  For uniform p the exponent
reaches its maximum log 4 / log 4k.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.optimize import bisect
from tqdm import tqdm

from config.settings import settings
from src.dntree import DnTree, DnTreeConfig
from src.workload import RmatParams, make_rng, rmat_sample_cells

logger = logging.getLogger(__name__)

UNIFORM_P = (0.25, 0.25, 0.25, 0.25)

# bracket of the exponent root; s <= 1 whenever k >= 1
S_LOW = 1e-9
S_HIGH = 2.0


class ExponentQuery(BaseModel):
    """Quadrant distribution and threshold growth factor."""

    model_config = ConfigDict(frozen=True)

    p: Tuple[float, float, float, float]
    growth_factor: float = Field(ge=1.0)

    @field_validator("p")
    @classmethod
    def _check_probabilities(cls, p):
        if any(x <= 0 for x in p):
            raise ValueError(f"All quadrant probabilities must be positive, got {p}")
        if abs(sum(p) - 1.0) > 1e-9:
            raise ValueError(f"Quadrant probabilities must sum to 1, got {sum(p)!r}")
        return p


@dataclass
class GrowthSample:
    """Node counts observed at increasing access counts."""
    points: List[Tuple[int, int]] = field(default_factory=list)

    def add(self, n: int, node_count: int) -> None:
        if self.points and n <= self.points[-1][0]:
            raise ValueError(f"Access counts must increase, got {n} after {self.points[-1][0]}")
        self.points.append((int(n), int(node_count)))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.points, columns=["N", "node_count"])


def _exponent_gap(s: float, p: np.ndarray, k: float) -> float:
    return float(np.sum(p ** s) - k ** s)


def solve_size_exponent(q: ExponentQuery) -> float:
    """
    Unique root of sum_i p_i^s - k^s on (0, 2].

    The left side is strictly decreasing while k^s is nondecreasing, and the
    difference is 3 at s = 0, so bisection always converges.
    """
    p = np.asarray(q.p, dtype=np.float64)
    k = float(q.growth_factor)
    return float(bisect(_exponent_gap, S_LOW, S_HIGH, args=(p, k), xtol=1e-15, maxiter=200))


def uniform_bound(growth_factor: float) -> float:
    """Largest exponent over all distributions: log 4 / log 4k."""
    if growth_factor < 1:
        raise ValueError(f"growth_factor must be >= 1, got {growth_factor}")
    return math.log(4) / math.log(4 * growth_factor)


def exponent_table(p_max_values: Iterable[float], k_values: Iterable[float]) -> pd.DataFrame:
    """
    Exponents for the family p = (p_max, r, r, r), r = (1 - p_max) / 3.

    Returns:
        DataFrame with columns p0..p3, k, s, bound
    """
    rows = []
    k_values = list(k_values)
    for p_max in p_max_values:
        rest = (1.0 - p_max) / 3.0
        p = (p_max, rest, rest, rest)
        for k in k_values:
            s = solve_size_exponent(ExponentQuery(p=p, growth_factor=k))
            rows.append({"p0": p[0], "p1": p[1], "p2": p[2], "p3": p[3], "k": k, "s": s, "bound": uniform_bound(k)})
    return pd.DataFrame(rows, columns=["p0", "p1", "p2", "p3", "k", "s", "bound"])


def fit_growth_exponent(samples: GrowthSample) -> float:
    """
    Least-squares slope of log(node_count) against log(N).

    Raises:
        ValueError: With fewer than three samples or a single distinct N
    """
    if len(samples.points) < 3:
        raise ValueError(f"Need at least 3 samples, got {len(samples.points)}")
    n = np.array([pt[0] for pt in samples.points], dtype=np.float64)
    nodes = np.array([pt[1] for pt in samples.points], dtype=np.float64)
    if np.unique(n).size < 2:
        raise ValueError("All samples share the same access count")
    if n.max() / n.min() < 100:
        logger.warning(f"Growth samples span only {n.max() / n.min():.1f}x, fit may be unreliable")
    slope, _ = np.polyfit(np.log(n), np.log(nodes), 1)
    return float(slope)


def measure_growth(
    params: RmatParams,
    config: DnTreeConfig,
    checkpoints: Sequence[int],
    chunk_size: int = 1_000_000
) -> GrowthSample:
    """
    Stream R-MAT transitions into a fresh tree and sample its node count.

    Args:
        params: Stream distribution (its depth must match the tree's side)
        config: Tree thresholds
        checkpoints: Increasing access counts at which to sample
        chunk_size: Transitions drawn per batch

    Returns:
        GrowthSample with one point per checkpoint
    """
    if params.side > config.extent_space:
        raise ValueError(f"Stream side {params.side} exceeds extent space {config.extent_space}")
    rng = make_rng(params.seed)
    tree = DnTree(config)
    sample = GrowthSample()
    recorded = 0
    for target in tqdm(sorted(checkpoints), desc="growth", disable=settings.progress_disabled):
        # N accesses produce N - 1 transitions
        while recorded < target - 1:
            batch = min(chunk_size, target - 1 - recorded)
            rows, cols = rmat_sample_cells(params, batch, rng)
            tree.record_many(rows, cols)
            recorded += batch
        sample.add(target, tree.stats().node_count)
        logger.debug(f"N={target}: {tree.stats().node_count} nodes")
    return sample
