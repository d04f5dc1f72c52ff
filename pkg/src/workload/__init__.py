"""Transition workloads, oracle replay and compression error."""

from .rmat import (
    ERROR_DISTRIBUTIONS,
    GRAPH500_P,
    RmatParams,
    make_rng,
    rmat_sample_cell,
    rmat_sample_cells,
)
from .replay import empty_oracle, replay, replay_transitions, read_sequence, write_sequence
from .error import ErrorReport, compression_error
from .sweep import SWEEP_COLUMNS, error_sweep

__all__ = [
    'ERROR_DISTRIBUTIONS',
    'GRAPH500_P',
    'RmatParams',
    'make_rng',
    'rmat_sample_cell',
    'rmat_sample_cells',
    'empty_oracle',
    'replay',
    'replay_transitions',
    'read_sequence',
    'write_sequence',
    'ErrorReport',
    'compression_error',
    'SWEEP_COLUMNS',
    'error_sweep',
]
