"""Shared fixtures."""
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.cli.golden import GOLDEN_EXTENTS, GOLDEN_K, GOLDEN_M, GOLDEN_M_HAT, GOLDEN_SEQUENCE, GOLDEN_T  # noqa: E402
from src.dntree import DnTree, DnTreeConfig  # noqa: E402
from src.workload import empty_oracle, replay  # noqa: E402


@pytest.fixture
def golden_sequence():
    return list(GOLDEN_SEQUENCE)


@pytest.fixture
def golden_config():
    return DnTreeConfig(base_threshold=GOLDEN_T, growth_factor=GOLDEN_K, extent_space=GOLDEN_EXTENTS)


@pytest.fixture
def golden_tree(golden_config, golden_sequence):
    tree, _ = replay(golden_sequence, DnTree(golden_config), empty_oracle(GOLDEN_EXTENTS))
    return tree


@pytest.fixture
def golden_m():
    return GOLDEN_M.copy()


@pytest.fixture
def golden_m_hat():
    return GOLDEN_M_HAT.copy()


def random_replay(seed: int, max_extents: int = 64, max_accesses: int = 10_000, t=None, k=None):
    """Seeded random (tree, oracle, sequence) with random t and k unless given."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, max_extents + 1))
    n = int(rng.integers(2, max_accesses + 1))
    t = int(rng.integers(0, 9)) if t is None else t
    k = float(rng.choice([1.0, 1.5, 2.0, 4.0])) if k is None else k
    seq = rng.integers(0, m, size=n)
    config = DnTreeConfig(base_threshold=t, growth_factor=k, extent_space=m)
    tree, oracle = replay(seq, DnTree(config), empty_oracle(m))
    return tree, oracle, seq
