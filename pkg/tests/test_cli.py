"""Tests for the command-line driver."""
import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from src.cli import cli
from src.cli.config_file import ExperimentConfig, load_experiment_config

SMALL_EXPERIMENT = """\
# tiny BFS comparison
scale=7
edge_factor=8
extent_size=16
queries=3
max_phases=4
repartition_interval=2
t=4
load_tolerance=none
seed=11
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def experiment_file(tmp_path):
    path = tmp_path / "experiment.env"
    path.write_text(SMALL_EXPERIMENT)
    return path


def invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *args])


class TestReplayGolden:
    def test_reference_values_match(self, runner):
        result = invoke(runner, "replay-golden")
        assert result.exit_code == 0, result.output
        assert "All reference values match" in result.output

    def test_json_report(self, runner):
        result = invoke(runner, "replay-golden", "--json")
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report["match"] is True
        assert report["cuts"] == {"M": [34, 24, 28], "M_hat": [34, 23, 29]}
        assert report["optimum"]["M_hat"] == [[0, 2], [1, 3]]
        assert report["node_count"] == 16

    def test_corrupted_sequence_names_first_cell(self, runner, tmp_path, golden_sequence):
        corrupted = [0] + golden_sequence[1:]
        path = tmp_path / "seq.txt"
        path.write_text("\n".join(str(x) for x in corrupted) + "\n")
        result = invoke(runner, "replay-golden", "--sequence-file", str(path))
        assert result.exit_code == 1
        assert "MISMATCH M[0][2]: expected 3, got 4" in result.output

    def test_unreadable_sequence_is_usage_error(self, runner, tmp_path):
        path = tmp_path / "seq.txt"
        path.write_text("1\nx\n")
        assert invoke(runner, "replay-golden", "--sequence-file", str(path)).exit_code == 2


class TestAnalysisCommands:
    def test_error_sweep(self, runner, tmp_path):
        result = invoke(runner, "error-sweep", "--p", "skewed", "--sides", "8", "--k-list", "1.5,2",
                        "--n", "500", "--t", "3", "--seeds", "2", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "error.csv")
        assert len(frame) == 4
        assert frame["error"].between(0, 1).all()

    def test_invalid_probabilities(self, runner, tmp_path):
        result = invoke(runner, "error-sweep", "--p", "0.5,0.5,0.5,0.5", "--out", str(tmp_path))
        assert result.exit_code == 2

    def test_wrong_probability_count(self, runner, tmp_path):
        result = invoke(runner, "exponent", "--p", "0.5,0.5", "--out", str(tmp_path))
        assert result.exit_code == 2

    def test_exponent_uniform(self, runner, tmp_path):
        result = invoke(runner, "exponent", "--k-list", "2,4", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "exponent.csv")
        np.testing.assert_allclose(frame["s"], [2 / 3, 1 / 2], atol=1e-4)

    def test_exponent_table(self, runner, tmp_path):
        result = invoke(runner, "exponent", "--table", "--k-list", "2", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "exponent.csv")
        assert len(frame) == 15
        assert frame["s"].is_monotonic_decreasing

    def test_size_sweep(self, runner, tmp_path):
        result = invoke(runner, "size-sweep", "--depth", "10", "--max-n", "10000", "--t", "4",
                        "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "growth.csv")
        assert frame["N"].iloc[-1] == 10_000
        assert "fitted exponent" in result.output


class TestPartitionCommand:
    def test_golden_matrix(self, runner, tmp_path, golden_m_hat):
        matrix = tmp_path / "m_hat.csv"
        pd.DataFrame(golden_m_hat).to_csv(matrix, header=False, index=False)
        result = invoke(runner, "partition", "--matrix", str(matrix), "--parts", "2", "--tolerance", "1.0",
                        "--engine", "exhaustive", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "partition.csv")
        assert frame["node_id"].tolist() == [0, 1, 0, 1]

    def test_edge_list(self, runner, tmp_path):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1 5\n2 3 5\n1 2 1\n")
        result = invoke(runner, "partition", "--edges", str(edges), "--parts", "2", "--tolerance", "1.0",
                        "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        assert pd.read_csv(tmp_path / "partition.csv")["node_id"].tolist() == [0, 0, 1, 1]

    def test_needs_exactly_one_input(self, runner, tmp_path):
        assert invoke(runner, "partition", "--parts", "2", "--out", str(tmp_path)).exit_code == 2

    def test_infeasible_is_domain_error(self, runner, tmp_path):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1 1\n1 2 1\n")
        result = invoke(runner, "partition", "--edges", str(edges), "--parts", "2", "--tolerance", "1.0",
                        "--out", str(tmp_path))
        assert result.exit_code == 1


class TestCompareCommand:
    def test_single_node(self, runner, tmp_path, experiment_file):
        result = invoke(runner, "compare", "--config", str(experiment_file), "--nodes", "1", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        metrics = pd.read_csv(tmp_path / "metrics.csv")
        assert metrics["system"].tolist() == ["static", "static", "DYDAP", "DYDAP"]
        assert (metrics["network_units"] == 0).all()
        assert metrics["makespan"].iloc[0] == metrics["makespan"].iloc[2]

    def test_unknown_config_key(self, runner, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("nodes=2\nwarp_speed=9\n")
        result = invoke(runner, "compare", "--config", str(path), "--out", str(tmp_path))
        assert result.exit_code == 2


class TestDeterminism:
    @pytest.fixture
    def command_args(self, tmp_path, experiment_file):
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1 5\n2 3 5\n1 2 1\n3 4 2\n4 5 5\n")
        return {
            "replay-golden": ["--json"],
            "error-sweep": ["--p", "skewed", "--sides", "8", "--k-list", "1.5,2", "--n", "500", "--t", "3",
                            "--seeds", "2"],
            "size-sweep": ["--depth", "10", "--max-n", "10000", "--t", "4"],
            "exponent": ["--table", "--k-list", "2,4"],
            "partition": ["--edges", str(edges), "--parts", "2", "--tolerance", "1.0", "--seed", "3"],
            "compare": ["--config", str(experiment_file), "--nodes", "2"],
        }

    @pytest.mark.parametrize("command", ["replay-golden", "error-sweep", "size-sweep", "exponent", "partition", "compare"])
    def test_reruns_are_byte_identical(self, runner, tmp_path, command_args, command):
        runs = []
        for name in ("a", "b"):
            out = tmp_path / name
            result = runner.invoke(cli, ["--log-level", "ERROR", command, *command_args[command], "--out", str(out)])
            assert result.exit_code == 0, result.output
            files = {path.name: path.read_bytes() for path in sorted(out.glob("*"))}
            runs.append((result.output, files))
        assert runs[0] == runs[1]
        if command != "replay-golden":
            assert runs[0][1]


class TestExperimentConfig:
    def test_file_and_overrides(self, experiment_file):
        config = load_experiment_config(experiment_file, nodes=3, seed=None)
        assert config.nodes == 3
        assert config.seed == 11
        assert config.load_tolerance is None
        assert config.cluster_config().num_nodes == 3

    def test_defaults(self):
        config = ExperimentConfig()
        assert config.workload == "bfs"
        assert config.scale == 16

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_experiment_config(tmp_path / "missing.env")
