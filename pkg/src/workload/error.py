"""Compression error of a DN-tree reconstruction."""
from dataclasses import dataclass
from typing import Optional
import logging

import numpy as np

from src.errors import DimensionMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorReport:
    """Normalized L1 discrepancy between M and M_hat."""
    error: float
    N: int
    matrix_side: int
    base_threshold: Optional[int] = None
    growth_factor: Optional[float] = None


def compression_error(
    exact: np.ndarray,
    approx: np.ndarray,
    N: int,
    base_threshold: Optional[int] = None,
    growth_factor: Optional[float] = None
) -> ErrorReport:
    """
    Sum of |M - M_hat| over 2(N - 1).

    Both matrices hold N - 1 transitions, so the value lies in [0, 1].

    Args:
        exact: Oracle matrix M
        approx: Unrounded reconstruction M_hat
        N: Number of accesses
        base_threshold: t of the tree, echoed into the report
        growth_factor: k of the tree, echoed into the report

    Raises:
        DimensionMismatchError: If the matrices differ in shape
        ValueError: If N < 2
    """
    exact = np.asarray(exact, dtype=np.float64)
    approx = np.asarray(approx, dtype=np.float64)
    if exact.shape != approx.shape or exact.ndim != 2 or exact.shape[0] != exact.shape[1]:
        raise DimensionMismatchError(f"Cannot compare matrices of shape {exact.shape} and {approx.shape}")
    if N < 2:
        raise ValueError(f"At least two accesses are needed, got N={N}")

    error = float(np.abs(exact - approx).sum() / (2.0 * (N - 1)))
    # float noise can push a total mismatch a hair past 1
    error = min(max(error, 0.0), 1.0)
    return ErrorReport(
        error=error,
        N=N,
        matrix_side=exact.shape[0],
        base_threshold=base_threshold,
        growth_factor=growth_factor,
    )
