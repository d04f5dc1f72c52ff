"""Tests for preorder encoding, the binary snapshot format and joins."""
import numpy as np
import pytest

from src.dntree import (
    DnTree,
    DnTreeConfig,
    SerializedDnTree,
    aggregate,
    deserialize,
    join,
    serialize,
)
from src.dntree.codec import HEADER, MAGIC
from src.errors import (
    ConfigMismatchError,
    EmptyAggregationError,
    MalformedEncodingError,
    ReadOnlyTreeError,
)
from src.workload import empty_oracle, replay
from tests.conftest import random_replay


def _empty(config):
    return serialize(DnTree(config))


def _random_trees(count, seed, config):
    rng = np.random.default_rng(seed)
    trees = []
    for _ in range(count):
        tree = DnTree(config)
        n = int(rng.integers(0, 400))
        tree.record_many(
            rng.integers(0, config.extent_space, n),
            rng.integers(0, config.extent_space, n),
        )
        trees.append(serialize(tree))
    return trees


class TestSerialize:
    def test_preorder_entries(self, golden_tree):
        encoded = serialize(golden_tree)
        assert len(encoded) == golden_tree.node_count
        assert encoded.total == 43
        # the last root child never saturated
        assert encoded.entries[-1] == (0, False)

    def test_deserialize_restores_tree(self, golden_tree):
        restored = deserialize(serialize(golden_tree))
        assert restored == golden_tree
        assert not restored.read_only
        np.testing.assert_array_equal(restored.rounded_matrix(), golden_tree.rounded_matrix())

    def test_restored_tree_keeps_recording(self, golden_config, golden_sequence):
        head, tail = golden_sequence[:20], golden_sequence[19:]
        tree = DnTree(golden_config)
        tree.record_many(head[:-1], head[1:])
        restored = deserialize(serialize(tree))
        restored.record_many(tail[:-1], tail[1:])
        full = DnTree(golden_config)
        full.record_many(golden_sequence[:-1], golden_sequence[1:])
        assert restored == full

    def test_empty_tree(self, golden_config):
        encoded = _empty(golden_config)
        assert encoded.entries == [(0, False)] * 4

    def test_config_mismatch(self, golden_tree):
        other = DnTreeConfig(base_threshold=5, growth_factor=1.0, extent_space=4)
        with pytest.raises(ConfigMismatchError):
            deserialize(serialize(golden_tree), config=other)

    def test_truncated_encoding(self, golden_tree):
        encoded = serialize(golden_tree)
        cut = SerializedDnTree(encoded.config, encoded.counts[:-1], encoded.markers[:-1])
        with pytest.raises(MalformedEncodingError):
            deserialize(cut)

    def test_trailing_entries(self, golden_tree):
        encoded = serialize(golden_tree)
        longer = SerializedDnTree(
            encoded.config,
            np.append(encoded.counts, 0),
            np.append(encoded.markers, False),
        )
        with pytest.raises(MalformedEncodingError):
            deserialize(longer)

    def test_children_below_max_depth(self, golden_config):
        entries = [(4, True)] + [(4, True)] + [(0, False)] * 3 + [(0, False)] * 3
        with pytest.raises(MalformedEncodingError):
            deserialize(SerializedDnTree.from_entries(golden_config, entries))


class TestBinaryFormat:
    def test_round_trip(self, golden_tree, tmp_path):
        encoded = serialize(golden_tree)
        path = tmp_path / "tree.dnt"
        encoded.save(path)
        assert SerializedDnTree.load(path) == encoded
        assert path.read_bytes()[:4] == MAGIC
        assert path.stat().st_size == HEADER.size + 9 * len(encoded)

    def test_bad_magic(self, golden_tree):
        data = bytearray(serialize(golden_tree).to_bytes())
        data[:4] = b"XXXX"
        with pytest.raises(MalformedEncodingError):
            SerializedDnTree.from_bytes(bytes(data))

    def test_length_mismatch(self, golden_tree):
        data = serialize(golden_tree).to_bytes()
        with pytest.raises(MalformedEncodingError):
            SerializedDnTree.from_bytes(data[:-1])
        with pytest.raises(MalformedEncodingError):
            SerializedDnTree.from_bytes(data[:HEADER.size - 1])

    def test_bad_marker_byte(self, golden_tree):
        data = bytearray(serialize(golden_tree).to_bytes())
        data[HEADER.size + 8] = 2
        with pytest.raises(MalformedEncodingError):
            SerializedDnTree.from_bytes(bytes(data))


class TestJoin:
    def test_empty_is_identity(self, golden_tree, golden_config):
        encoded = serialize(golden_tree)
        assert join(encoded, _empty(golden_config)) == encoded
        assert join(_empty(golden_config), encoded) == encoded

    @pytest.mark.parametrize("seed", range(10))
    def test_commutative_and_additive(self, seed):
        config = DnTreeConfig(base_threshold=3, growth_factor=1.5, extent_space=20)
        a, b = _random_trees(2, seed, config)
        ab, ba = join(a, b), join(b, a)
        assert ab.to_bytes() == ba.to_bytes()
        assert ab.total == a.total + b.total

    def test_split_golden_sequence_totals(self, golden_config, golden_sequence):
        # the halves share the middle access so no transition is lost
        middle = len(golden_sequence) // 2
        first, _ = replay(golden_sequence[:middle + 1], DnTree(golden_config), empty_oracle(4))
        second, _ = replay(golden_sequence[middle:], DnTree(golden_config), empty_oracle(4))
        joined = join(serialize(first), serialize(second))
        assert joined.total == 43
        assert deserialize(joined).counter_sum() == 43

    def test_joined_reconstruction_conserves_mass(self):
        config = DnTreeConfig(base_threshold=2, growth_factor=2.0, extent_space=16)
        a, b = _random_trees(2, 11, config)
        joined = deserialize(join(a, b))
        assert sum(joined.reconstruct_matrix(exact=True).ravel()) == a.total + b.total

    def test_self_join_is_read_only(self, golden_tree):
        encoded = serialize(golden_tree)
        joined = deserialize(join(encoded, encoded))
        assert joined.read_only
        with pytest.raises(ReadOnlyTreeError):
            joined.record(0, 1)

    def test_config_mismatch(self, golden_tree):
        other = DnTree(DnTreeConfig(base_threshold=4, growth_factor=2.0, extent_space=4))
        with pytest.raises(ConfigMismatchError):
            join(serialize(golden_tree), serialize(other))

    def test_zero_threshold_join_matches_summed_oracles(self):
        tree_a, oracle_a, _ = random_replay(1, max_extents=16, max_accesses=500, t=0, k=1.0)
        rng = np.random.default_rng(2)
        seq = rng.integers(0, tree_a.config.extent_space, 300)
        tree_b = DnTree(tree_a.config)
        tree_b.record_many(seq[:-1], seq[1:])
        oracle_b = np.zeros_like(oracle_a)
        np.add.at(oracle_b, (seq[:-1], seq[1:]), 1)
        joined = deserialize(join(serialize(tree_a), serialize(tree_b)))
        np.testing.assert_array_equal(joined.reconstruct_matrix(), oracle_a + oracle_b)


class TestAggregate:
    @pytest.mark.parametrize("count", [1, 2, 3, 4, 7, 16])
    def test_join_count(self, count):
        config = DnTreeConfig(base_threshold=3, growth_factor=1.5, extent_space=12)
        trees = _random_trees(count, count, config)
        result = aggregate(trees)
        assert result.joins == count - 1
        assert result.tree.total == sum(t.total for t in trees)

    def test_input_order_does_not_matter(self):
        config = DnTreeConfig(base_threshold=3, growth_factor=1.5, extent_space=12)
        trees = _random_trees(6, 21, config)
        expected = aggregate(trees).tree.to_bytes()
        rng = np.random.default_rng(0)
        for _ in range(5):
            order = rng.permutation(len(trees))
            assert aggregate([trees[i] for i in order]).tree.to_bytes() == expected
        assert aggregate(trees, fanout=3).tree.to_bytes() == expected

    def test_fanout_does_not_change_join_count(self):
        config = DnTreeConfig(base_threshold=3, growth_factor=1.5, extent_space=12)
        trees = _random_trees(9, 5, config)
        assert aggregate(trees, fanout=3).joins == 8

    def test_empty_input(self):
        with pytest.raises(EmptyAggregationError):
            aggregate([])
