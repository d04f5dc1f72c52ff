"""Tests for R-MAT sampling, replay, compression error and the error sweep."""
import numpy as np
import pytest

from src.dntree import DnTree
from src.errors import DimensionMismatchError
from src.workload import (
    ERROR_DISTRIBUTIONS,
    RmatParams,
    compression_error,
    empty_oracle,
    error_sweep,
    make_rng,
    read_sequence,
    replay,
    rmat_sample_cell,
    rmat_sample_cells,
    write_sequence,
)


class TestRmat:
    def test_cells_within_side(self):
        params = RmatParams(p=(0.57, 0.19, 0.19, 0.05), depth=5, seed=3)
        rows, cols = rmat_sample_cells(params, 10_000)
        assert rows.min() >= 0 and cols.min() >= 0
        assert rows.max() < 32 and cols.max() < 32

    def test_seeded_stream_is_reproducible(self):
        params = RmatParams(p=(0.45, 0.25, 0.25, 0.05), depth=8, seed=11)
        a = rmat_sample_cells(params, 1000)
        b = rmat_sample_cells(params, 1000)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_quadrant_frequencies(self):
        params = RmatParams(p=(0.7, 0.1, 0.1, 0.1), depth=1, seed=0)
        rows, cols = rmat_sample_cells(params, 100_000)
        quadrant = rows * 2 + cols
        freq = np.bincount(quadrant, minlength=4) / quadrant.size
        np.testing.assert_allclose(freq, [0.7, 0.1, 0.1, 0.1], atol=0.01)

    def test_uniform_depth_one_frequencies(self):
        rows, cols = rmat_sample_cells(RmatParams(p=(0.25,) * 4, depth=1, seed=5), 100_000)
        freq = np.bincount(rows * 2 + cols, minlength=4) / rows.size
        np.testing.assert_allclose(freq, [0.25] * 4, atol=0.01)

    def test_top_left_share_at_depth_nine(self):
        params = RmatParams(p=(0.45, 0.25, 0.25, 0.05), depth=9, seed=9)
        rows, cols = rmat_sample_cells(params, 1_000_000)
        top_left = ((rows < 256) & (cols < 256)).mean()
        assert top_left == pytest.approx(0.45, abs=0.01)

    def test_degenerate_corner(self):
        eps = 1e-12
        params = RmatParams(p=(1 - 3 * eps, eps, eps, eps), depth=9)
        rng = make_rng(0)
        assert [rmat_sample_cell(params, rng) for _ in range(20)] == [(0, 0)] * 20

    def test_depth_zero_is_single_cell(self):
        rows, cols = rmat_sample_cells(RmatParams(p=(0.25,) * 4, depth=0), 50)
        assert not rows.any() and not cols.any()

    def test_single_cell(self):
        params = RmatParams(p=(0.25,) * 4, depth=4)
        i, j = rmat_sample_cell(params, make_rng(0))
        assert 0 <= i < 16 and 0 <= j < 16

    @pytest.mark.parametrize("p", [(0.5, 0.5, 0.1, 0.1), (0.5, 0.5, 0.0, 0.0), (-0.1, 0.5, 0.3, 0.3)])
    def test_invalid_probabilities(self, p):
        with pytest.raises(ValueError):
            RmatParams(p=p, depth=2)

    def test_named_distributions_are_valid(self):
        for p in ERROR_DISTRIBUTIONS.values():
            RmatParams(p=p, depth=1)


class TestReplay:
    def test_oracle_matches_golden(self, golden_sequence, golden_config, golden_m):
        _, oracle = replay(golden_sequence, DnTree(golden_config), empty_oracle(4))
        np.testing.assert_array_equal(oracle, golden_m)
        assert oracle.sum() == len(golden_sequence) - 1

    def test_short_sequences_record_nothing(self, golden_config):
        tree, oracle = replay([2], DnTree(golden_config), empty_oracle(4))
        assert tree.total_recorded == 0
        assert not oracle.any()

    def test_self_transitions_are_recorded(self, golden_config):
        tree, oracle = replay([1, 1, 1], DnTree(golden_config), empty_oracle(4))
        assert tree.total_recorded == 2
        assert oracle[1, 1] == 2

    def test_oracle_shape_checked(self, golden_config):
        with pytest.raises(DimensionMismatchError):
            replay([0, 1], DnTree(golden_config), empty_oracle(5))

    def test_sequence_files(self, tmp_path, golden_sequence):
        path = tmp_path / "seq.txt"
        write_sequence(path, golden_sequence)
        assert read_sequence(path) == golden_sequence

    def test_bad_sequence_line(self, tmp_path):
        path = tmp_path / "seq.txt"
        path.write_text("1\n2\nthree\n")
        with pytest.raises(ValueError, match=":3:"):
            read_sequence(path)


class TestCompressionError:
    def test_exact_reconstruction_has_zero_error(self, golden_m):
        report = compression_error(golden_m, golden_m.astype(float), 44, 4, 1.0)
        assert report.error == 0.0
        assert report.matrix_side == 4
        assert report.base_threshold == 4

    def test_golden_error(self, golden_tree, golden_m):
        report = compression_error(golden_m, golden_tree.reconstruct_matrix(), 44)
        diff = np.abs(golden_m - golden_tree.reconstruct_matrix()).sum()
        assert report.error == pytest.approx(diff / 86)
        assert 0 < report.error < 1

    def test_disjoint_mass_is_one(self):
        exact = np.array([[3.0, 0.0], [0.0, 0.0]])
        approx = np.array([[0.0, 3.0], [0.0, 0.0]])
        assert compression_error(exact, approx, 4).error == pytest.approx(1.0)

    def test_symmetric_in_matrix_arguments(self, golden_tree, golden_m):
        approx = golden_tree.reconstruct_matrix()
        forward = compression_error(golden_m, approx, 44).error
        backward = compression_error(approx, golden_m, 44).error
        assert forward == backward
        assert forward > 0
        assert compression_error(approx, approx, 44).error == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            compression_error(np.zeros((2, 2)), np.zeros((3, 3)), 5)

    def test_needs_two_accesses(self):
        with pytest.raises(ValueError):
            compression_error(np.zeros((2, 2)), np.zeros((2, 2)), 1)


class TestErrorSweep:
    def test_zero_threshold_rows_are_zero(self):
        frame = error_sweep(ERROR_DISTRIBUTIONS["near-uniform"], [16, 32], [1.5, 4], 5_000, 0, seeds=[1])
        assert len(frame) == 4
        assert (frame["error"] == 0).all()

    def test_single_cell_side_is_exact(self):
        frame = error_sweep(ERROR_DISTRIBUTIONS["skewed"], [1], [1.5, 8], 1_000, 16)
        assert (frame["error"] == 0).all()

    def test_columns_and_echo(self):
        frame = error_sweep((0.25,) * 4, [8], [2.0], 500, 3, seeds=[0, 1])
        assert list(frame.columns) == ["p0", "p1", "p2", "p3", "side", "k", "t", "N", "seed", "error"]
        assert frame["seed"].tolist() == [0, 1]
        assert frame["error"].between(0, 1).all()

    def test_side_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            error_sweep((0.25,) * 4, [12], [2.0], 100, 4)

    def test_deterministic(self):
        p = ERROR_DISTRIBUTIONS["intermediate"]
        a = error_sweep(p, [64], [1.5, 2.0], 20_000, 16, seeds=[3])
        b = error_sweep(p, [64], [1.5, 2.0], 20_000, 16, seeds=[3])
        assert a.equals(b)

    @pytest.mark.slow
    def test_error_trends(self):
        errors = {}
        for name, p in ERROR_DISTRIBUTIONS.items():
            frame = error_sweep(p, [512], [1.5, 4.0, 8.0], 1_000_000, 16, seeds=range(5))
            errors[name] = frame.pivot(index="seed", columns="k", values="error")
            assert (errors[name][1.5] <= errors[name][8.0]).sum() >= 4

        # at about 4 accesses per cell, sampling noise dominates the near-uniform error for small k
        for k in (4.0, 8.0):
            assert (errors["near-uniform"][k] <= errors["skewed"][k]).all()
