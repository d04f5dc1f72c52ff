"""Partitioning engines."""
import logging

from .base import BaseEngine
from .heuristic import HeuristicEngine
from .exhaustive import ExhaustiveEngine

logger = logging.getLogger(__name__)

__all__ = [
    'BaseEngine',
    'HeuristicEngine',
    'ExhaustiveEngine',
    'get_engine',
]


# Engine factory
def get_engine(engine_type: str, seed: int = 42, **kwargs) -> BaseEngine:
    """
    Get partitioning engine by name.

    Args:
        engine_type: Name of the engine
        seed: Random seed passed to the engine
        **kwargs: Engine-specific parameters

    Returns:
        Engine instance
    """
    engines = {
        'heuristic': HeuristicEngine,
        'exhaustive': ExhaustiveEngine,
    }

    engine_class = engines.get(engine_type.lower())
    if engine_class is None:
        logger.warning(f"Unknown engine {engine_type}, using heuristic")
        engine_class = HeuristicEngine
    return engine_class(seed=seed, **kwargs)
