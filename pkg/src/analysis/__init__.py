"""Size analysis of the DN-tree."""

from .size_exponent import (
    UNIFORM_P,
    ExponentQuery,
    GrowthSample,
    exponent_table,
    fit_growth_exponent,
    measure_growth,
    solve_size_exponent,
    uniform_bound,
)

__all__ = [
    'UNIFORM_P',
    'ExponentQuery',
    'GrowthSample',
    'exponent_table',
    'fit_growth_exponent',
    'measure_growth',
    'solve_size_exponent',
    'uniform_bound',
]
