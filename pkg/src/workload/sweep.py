"""Compression error over a grid of matrix sides and growth factors."""
from typing import Iterable, Sequence
import logging

import numpy as np
import pandas as pd
from tqdm import tqdm

from config.settings import settings
from src.dntree import DnTree, DnTreeConfig
from src.workload.error import compression_error
from src.workload.rmat import RmatParams, rmat_sample_cells

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["p0", "p1", "p2", "p3", "side", "k", "t", "N", "seed", "error"]


def error_sweep(
    p: Sequence[float],
    sides: Iterable[int],
    k_list: Iterable[float],
    n: int,
    t: int,
    seeds: Iterable[int] = (0,)
) -> pd.DataFrame:
    """
    One error row per (seed, side, k).

    All growth factors of a (seed, side) pair replay the same stream of
    n - 1 R-MAT transitions.

    Raises:
        ValueError: If a side is not a power of two or n < 2
    """
    if n < 2:
        raise ValueError(f"At least two accesses are needed, got n={n}")
    k_list = [float(k) for k in k_list]
    rows = []
    for seed in seeds:
        for side in sides:
            if side < 1 or side & (side - 1):
                raise ValueError(f"Matrix side must be a power of two, got {side}")
            params = RmatParams(p=tuple(p), depth=int(side).bit_length() - 1, seed=int(seed))
            prev, nxt = rmat_sample_cells(params, n - 1)
            oracle = np.bincount(prev * side + nxt, minlength=side * side).reshape(side, side)
            for k in tqdm(k_list, desc=f"side {side}", disable=settings.progress_disabled):
                tree = DnTree(DnTreeConfig(base_threshold=t, growth_factor=k, extent_space=side))
                tree.record_many(prev, nxt)
                report = compression_error(oracle, tree.reconstruct_matrix(), n, t, k)
                rows.append({
                    "p0": p[0], "p1": p[1], "p2": p[2], "p3": p[3],
                    "side": side, "k": k, "t": t, "N": n, "seed": int(seed),
                    "error": report.error,
                })
                logger.debug(f"seed={seed} side={side} k={k}: error {report.error:.6f}")
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
