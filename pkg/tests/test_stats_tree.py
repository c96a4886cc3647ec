"""
Tests for the counter-augmented tree T with its positive index and list.
"""
import random
from collections import Counter

import pytest

from app.core.errors import StructurePreconditionError, WindowConsistencyError
from app.core.oracle import exact_auc
from app.models.events import MAX_KEY, MIN_KEY, finite_key
from app.structures.stats_tree import StatsTree
from tests.conftest import neg, pos


def build(events):
    tree = StatsTree()
    for event in events:
        if event.is_positive:
            tree.add_tree_pos(event.score)
        else:
            tree.add_tree_neg(event.score)
    return tree


def p_keys(tree):
    return [node.key for node in tree.pos_list]


@pytest.fixture
def small_tree():
    return build([pos(1), neg(2), pos(3)])


class TestQueries:

    def test_head_stats(self, small_tree):
        assert small_tree.head_stats(finite_key(3.0)) == (1, 1)
        assert small_tree.head_stats(finite_key(1.0)) == (0, 0)
        assert small_tree.head_stats(MAX_KEY) == (2, 1)
        assert small_tree.head_stats(MIN_KEY) == (0, 0)

    def test_head_stats_requires_live_key(self, small_tree):
        with pytest.raises(StructurePreconditionError):
            small_tree.head_stats(finite_key(2.5))

    def test_max_pos(self, small_tree):
        assert small_tree.max_pos(2.5).key == finite_key(1.0)
        assert small_tree.max_pos(0.5) is small_tree.min_node
        assert small_tree.max_pos(3.0).key == finite_key(3.0)

    def test_totals(self, small_tree):
        assert (small_tree.total_pos, small_tree.total_neg) == (2, 1)


class TestPositiveUpdates:

    def test_first_insertion(self):
        tree = StatsTree()
        node = tree.add_tree_pos(5.0)
        assert p_keys(tree) == [MIN_KEY, finite_key(5.0), MAX_KEY]
        assert node.poslab == 1
        assert tree.pos_list.gaps(node) == (1, 0)

    def test_duplicates_share_a_node(self):
        tree = StatsTree()
        first = tree.add_tree_pos(5.0)
        second = tree.add_tree_pos(5.0)
        assert first is second
        assert first.poslab == 2
        assert len(tree.pos_list) == 3
        assert tree.pos_list.gaps(first) == (2, 0)

    def test_new_positive_splits_gap(self):
        tree = build([pos(1), neg(4)])
        node1 = tree.find_score(1.0)
        assert tree.pos_list.gaps(node1) == (1, 1)
        node6 = tree.add_tree_pos(6.0)
        assert tree.pos_list.next(node1) is node6
        assert tree.pos_list.gaps(node1) == (1, 1)
        assert tree.pos_list.gaps(node6) == (1, 0)
        assert tree.check_structure() is None

    def test_remove_keeps_node_with_remaining_positive(self):
        tree = build([pos(5), pos(5)])
        tree.remove_tree_pos(5.0)
        assert tree.find_score(5.0).poslab == 1

    def test_remove_last_positive_drops_node(self):
        tree = build([pos(5)])
        tree.remove_tree_pos(5.0)
        assert tree.find_score(5.0) is None
        assert p_keys(tree) == [MIN_KEY, MAX_KEY]
        assert len(tree.tp_index) == 2
        assert tree.check_structure() is None

    def test_removed_gap_merges_into_predecessor(self):
        tree = build([pos(1), pos(3), neg(4)])
        tree.remove_tree_pos(3.0)
        assert tree.pos_list.gaps(tree.find_score(1.0)) == (1, 1)
        assert tree.check_structure() is None

    def test_node_with_negatives_survives_losing_positives(self):
        tree = build([pos(2), neg(2)])
        tree.remove_tree_pos(2.0)
        node = tree.find_score(2.0)
        assert node is not None and node.neglab == 1
        assert node not in tree.pos_list
        assert tree.check_structure() is None

    def test_remove_absent_positive(self):
        tree = build([neg(2)])
        with pytest.raises(WindowConsistencyError):
            tree.remove_tree_pos(2.0)
        with pytest.raises(WindowConsistencyError):
            tree.remove_tree_pos(7.0)


class TestNegativeUpdates:

    def test_negative_in_empty_tree(self):
        tree = StatsTree()
        tree.add_tree_neg(2.0)
        assert p_keys(tree) == [MIN_KEY, MAX_KEY]
        assert tree.pos_list.gaps(tree.min_node) == (0, 1)

    def test_negative_lands_in_preceding_positive_gap(self):
        tree = build([pos(1)])
        tree.add_tree_neg(2.0)
        assert tree.pos_list.gaps(tree.find_score(1.0)) == (1, 1)

    def test_duplicate_negatives(self):
        tree = build([neg(2), neg(2)])
        assert tree.find_score(2.0).neglab == 2

    def test_add_remove_inverse(self):
        tree = build([pos(1), neg(3)])
        before = (tree.counts(), [(n.key, tree.pos_list.gaps(n)) for n in tree.pos_list])
        tree.add_tree_neg(2.0)
        tree.remove_tree_neg(2.0)
        after = (tree.counts(), [(n.key, tree.pos_list.gaps(n)) for n in tree.pos_list])
        assert before == after

    def test_remove_negative(self):
        tree = build([pos(1), neg(2)])
        tree.remove_tree_neg(2.0)
        assert tree.pos_list.gaps(tree.find_score(1.0)) == (1, 0)
        assert tree.find_score(2.0) is None

    def test_remove_absent_negative(self):
        with pytest.raises(WindowConsistencyError):
            StatsTree().remove_tree_neg(2.0)


def test_exact_auc_matches_oracle(small_tree):
    assert small_tree.exact_auc() == exact_auc([pos(1), neg(2), pos(3)])


def test_check_structure_detects_corrupted_aggregate(small_tree):
    small_tree.root.accpos += 1
    assert "aggregates" in small_tree.check_structure()


def test_random_operations_keep_structure(rng):
    tree = StatsTree()
    live = Counter()
    for _ in range(1500):
        score = float(rng.randrange(60))
        label = rng.random() < 0.5
        if live[(score, label)] and rng.random() < 0.45:
            live[(score, label)] -= 1
            if label:
                tree.remove_tree_pos(score)
            else:
                tree.remove_tree_neg(score)
        else:
            live[(score, label)] += 1
            if label:
                tree.add_tree_pos(score)
            else:
                tree.add_tree_neg(score)
        assert tree.check_structure() is None

    events = [pos(s) if label else neg(s) for (s, label), count in live.items() for _ in range(count)]
    assert tree.exact_auc() == exact_auc(events)
    assert tree.total_pos == sum(1 for e in events if e.is_positive)


def p_state(tree):
    return [(node.key, tree.pos_list.gaps(node)) for node in tree.pos_list]


def test_incremental_auc_tracks_traversal(rng):
    tree = StatsTree()
    live = []
    for _ in range(800):
        if live and rng.random() < 0.45:
            event = live.pop(rng.randrange(len(live)))
            if event.is_positive:
                tree.remove_tree_pos(event.score)
            else:
                tree.remove_tree_neg(event.score)
        else:
            score = float(rng.randrange(25))
            event = pos(score) if rng.random() < 0.5 else neg(score)
            live.append(event)
            if event.is_positive:
                tree.add_tree_pos(score)
            else:
                tree.add_tree_neg(score)
        assert tree.auc() == tree.exact_auc()
        assert tree.auc() == exact_auc(live)


def test_replayed_history_matches_fresh_rebuild(rng):
    tree = StatsTree()
    live = []
    for _ in range(1200):
        if live and rng.random() < 0.45:
            event = live.pop(rng.randrange(len(live)))
            if event.is_positive:
                tree.remove_tree_pos(event.score)
            else:
                tree.remove_tree_neg(event.score)
        else:
            score = float(rng.randrange(70)) if rng.random() < 0.7 else rng.uniform(0, 70)
            event = pos(score) if rng.random() < 0.4 else neg(score)
            live.append(event)
            if event.is_positive:
                tree.add_tree_pos(score)
            else:
                tree.add_tree_neg(score)

    shuffled = list(live)
    rng.shuffle(shuffled)
    rebuilt = build(shuffled)
    assert tree.counts() == rebuilt.counts()
    assert p_state(tree) == p_state(rebuilt)
    assert tree.auc() == rebuilt.auc()
