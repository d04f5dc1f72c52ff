"""Tests for the size-exponent solver and growth measurement."""
import math

import numpy as np
import pytest

from src.analysis import (
    UNIFORM_P,
    ExponentQuery,
    GrowthSample,
    exponent_table,
    fit_growth_exponent,
    measure_growth,
    solve_size_exponent,
    uniform_bound,
)
from src.dntree import DnTreeConfig
from src.workload import RmatParams


class TestSolver:
    @pytest.mark.parametrize("k, expected", [
        (1.5, math.log(4) / math.log(6)),
        (2.0, 2 / 3),
        (4.0, 1 / 2),
        (8.0, 2 / 5),
    ])
    def test_uniform_exponents(self, k, expected):
        s = solve_size_exponent(ExponentQuery(p=UNIFORM_P, growth_factor=k))
        assert s == pytest.approx(expected, abs=1e-4)
        assert s == pytest.approx(uniform_bound(k), abs=1e-9)

    def test_k_one_gives_linear_growth(self):
        assert solve_size_exponent(ExponentQuery(p=UNIFORM_P, growth_factor=1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_root_solves_equation(self):
        p = (0.45, 0.25, 0.25, 0.05)
        s = solve_size_exponent(ExponentQuery(p=p, growth_factor=2.0))
        assert sum(x ** s for x in p) == pytest.approx(2.0 ** s, abs=1e-9)

    def test_intermediate_regression_value(self):
        s = solve_size_exponent(ExponentQuery(p=(0.45, 0.25, 0.25, 0.05), growth_factor=2.0))
        assert s == pytest.approx(0.643870120284, abs=1e-10)

    @pytest.mark.parametrize("p", [UNIFORM_P, (0.45, 0.25, 0.25, 0.05), (0.9, 0.09, 0.009, 0.001)])
    def test_exponent_nonincreasing_in_k(self, p):
        exponents = [solve_size_exponent(ExponentQuery(p=p, growth_factor=k)) for k in (1.0, 1.5, 2.0, 4.0, 8.0, 16.0)]
        assert all(a >= b for a, b in zip(exponents, exponents[1:]))

    def test_uniform_is_the_maximum(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            raw = rng.random(4) + 1e-3
            p = tuple(float(x) for x in raw / raw.sum())
            p = p[:3] + (1.0 - sum(p[:3]),)
            k = float(rng.choice([1.5, 2.0, 4.0, 8.0]))
            s = solve_size_exponent(ExponentQuery(p=p, growth_factor=k))
            assert s <= uniform_bound(k) + 1e-9

    def test_skew_lowers_exponent(self):
        near = solve_size_exponent(ExponentQuery(p=(0.30, 0.25, 0.25, 0.20), growth_factor=2.0))
        skewed = solve_size_exponent(ExponentQuery(p=(0.9, 0.09, 0.009, 0.001), growth_factor=2.0))
        assert skewed < near

    def test_invalid_query(self):
        with pytest.raises(ValueError):
            ExponentQuery(p=(0.5, 0.5, 0.5, 0.5), growth_factor=2.0)
        with pytest.raises(ValueError):
            ExponentQuery(p=UNIFORM_P, growth_factor=0.5)
        with pytest.raises(ValueError):
            uniform_bound(0.5)


class TestExponentTable:
    def test_uniform_row_matches_bound(self):
        frame = exponent_table([0.25, 0.5], [2.0, 4.0])
        assert list(frame.columns) == ["p0", "p1", "p2", "p3", "k", "s", "bound"]
        assert len(frame) == 4
        uniform = frame[frame["p0"] == 0.25]
        np.testing.assert_allclose(uniform["s"], uniform["bound"], atol=1e-9)
        skewed = frame[frame["p0"] == 0.5]
        assert (skewed["s"].to_numpy() < skewed["bound"].to_numpy()).all()


class TestGrowth:
    def test_sample_must_increase(self):
        sample = GrowthSample()
        sample.add(10, 4)
        with pytest.raises(ValueError):
            sample.add(10, 8)

    def test_fit_recovers_power_law(self):
        sample = GrowthSample()
        for n in (10**3, 10**4, 10**5, 10**6):
            sample.add(n, int(round(3 * n ** 0.5)))
        assert fit_growth_exponent(sample) == pytest.approx(0.5, abs=1e-3)

    def test_constant_node_count_fits_zero(self):
        sample = GrowthSample()
        for n in (10**2, 10**3, 10**4, 10**5):
            sample.add(n, 40)
        assert fit_growth_exponent(sample) == pytest.approx(0.0, abs=1e-12)

    def test_fit_needs_three_points(self):
        sample = GrowthSample()
        sample.add(10, 4)
        sample.add(100, 8)
        with pytest.raises(ValueError):
            fit_growth_exponent(sample)

    def test_measure_growth_is_monotone(self):
        params = RmatParams(p=(0.45, 0.25, 0.25, 0.05), depth=10, seed=1)
        config = DnTreeConfig(base_threshold=16, growth_factor=2.0, extent_space=1 << 10)
        sample = measure_growth(params, config, [1_000, 10_000, 100_000], chunk_size=25_000)
        frame = sample.to_frame()
        assert frame["N"].tolist() == [1_000, 10_000, 100_000]
        assert frame["node_count"].is_monotonic_increasing

    def test_stream_wider_than_tree_rejected(self):
        params = RmatParams(p=UNIFORM_P, depth=6)
        config = DnTreeConfig(base_threshold=4, growth_factor=2.0, extent_space=32)
        with pytest.raises(ValueError):
            measure_growth(params, config, [100])

    @pytest.mark.slow
    def test_sublinear_growth_at_desk_scale(self):
        p = (0.45, 0.25, 0.25, 0.05)
        params = RmatParams(p=p, depth=20, seed=0)
        config = DnTreeConfig(base_threshold=16, growth_factor=2.0, extent_space=1 << 20)
        checkpoints = [int(x) for x in np.logspace(4, 7, 10)]
        sample = measure_growth(params, config, checkpoints)
        fitted = fit_growth_exponent(sample)
        solved = solve_size_exponent(ExponentQuery(p=p, growth_factor=2.0))
        assert fitted <= solved + 0.05
