"""
Tests for the compressed-list AUC estimator.
"""
import random
from collections import Counter
from fractions import Fraction

import pytest

from app.core.errors import WindowConsistencyError
from app.core.oracle import within_guarantee
from app.models.events import MAX_KEY, MIN_KEY, AucValue, finite_key
from app.services.estimator import COMPRESSED_LIST, approx_auc, size_bound
from app.structures.weighted_list import WeightedList
from tests.conftest import neg, pos


def keys(*scores):
    return [MIN_KEY] + [finite_key(float(s)) for s in scores] + [MAX_KEY]


def uncompressed_run(make_estimator):
    """Positives 1..4 with alpha = 2 and every positive node in C."""
    estimator = make_estimator("1")
    for score in (1.0, 2.0, 3.0, 4.0):
        estimator.tree.add_tree_pos(score)
    estimator.clist.link(estimator.clist.head).gappos = 4
    member = estimator.clist.head
    while estimator.tree.pos_list.next(member) is not estimator.clist.tail:
        estimator.add_next(member)
        member = estimator.clist.next(member)
    return estimator


def random_ops(estimator, rng, count, grid=80, positive_rate=0.5, capacity=500, check=None):
    """Random mixed add/remove operations; removals pick a live entry."""
    live = Counter()
    size = 0
    for _ in range(count):
        if size and (size >= capacity or rng.random() < 0.45):
            entry = rng.choice(sorted(e for e, c in live.items() if c))
            live[entry] -= 1
            size -= 1
            score, positive = entry
            estimator.remove(pos(score) if positive else neg(score))
        else:
            score = float(rng.randrange(grid)) if grid else rng.gauss(0.0, 1.0)
            positive = rng.random() < positive_rate
            live[(score, positive)] += 1
            size += 1
            estimator.add(pos(score) if positive else neg(score))
        if check is not None:
            check(estimator)


class TestApproxAuc:

    def test_list_with_every_positive_is_exact(self, make_estimator):
        estimator = make_estimator("0.5")
        for event in [pos(1), neg(2), pos(3), neg(3), pos(5), neg(0)]:
            if event.is_positive:
                estimator.tree.add_tree_pos(event.score)
            else:
                estimator.tree.add_tree_neg(event.score)
        assert estimator.approx_auc(estimator.tree.pos_list) == estimator.exact()

    def test_grouped_positives_underestimate(self, make_estimator):
        estimator = make_estimator("2")
        tree = estimator.tree
        for score in (1.0, 2.0, 3.0):
            tree.add_tree_pos(score)
        tree.add_tree_neg(4.0)
        partial = WeightedList("L", tree.min_node, tree.max_node, gappos=3, gapneg=1)
        partial.add(tree.min_node, tree.find_score(1.0), 0, 0)
        assert approx_auc(partial, 3, 1) == AucValue(Fraction(2, 3))
        assert estimator.exact() == AucValue(Fraction(1))

    def test_single_pair(self, make_estimator):
        estimator = make_estimator("0.1")
        estimator.add(pos(1))
        estimator.add(neg(2))
        assert estimator.compressed_keys() == keys(1)
        assert estimator.estimate() == AucValue(Fraction(1))


class TestListMaintenance:

    def test_add_next(self, make_estimator):
        estimator = make_estimator("0.1")
        estimator.tree.add_tree_pos(1.0)
        estimator.clist.link(estimator.clist.head).gappos = 1
        estimator.add_next(estimator.clist.head)
        assert estimator.compressed_keys() == keys(1)
        assert estimator.clist.gaps(estimator.tree.find_score(1.0)) == (1, 0)

    def test_add_next_is_idempotent(self, make_estimator):
        estimator = make_estimator("0.1")
        estimator.add(pos(1))
        before = estimator.snapshot()
        estimator.add_next(estimator.clist.head)
        assert estimator.snapshot() == before

    def test_compress_trace(self, make_estimator):
        estimator = uncompressed_run(make_estimator)
        assert estimator.compressed_keys() == keys(1, 2, 3, 4)

        estimator.compress()
        assert estimator.compressed_keys() == keys(1, 3)
        assert estimator.verify_invariants().ok

        estimator.compress()
        assert estimator.compressed_keys() == keys(1, 3)

    def test_first_positive_is_kept(self, make_estimator):
        estimator = make_estimator("0.9")
        estimator.add(pos(1))
        assert estimator.compressed_keys() == keys(1)

    def test_add_then_remove_returns_to_empty(self, make_estimator):
        estimator = make_estimator("0.1")
        empty = estimator.snapshot()
        estimator.add(pos(1))
        estimator.remove(pos(1))
        assert estimator.snapshot() == empty
        assert estimator.compressed_keys() == keys()

    def test_negative_gap_follows_located_member(self, make_estimator):
        estimator = make_estimator("0.1")
        estimator.add(pos(1))
        estimator.add(neg(2))
        assert estimator.clist.gaps(estimator.tree.find_score(1.0)) == (1, 1)

    def test_negative_add_remove_restores_state(self, make_estimator, rng):
        estimator = make_estimator("0.3")
        random_ops(estimator, rng, 200)
        before = estimator.snapshot()
        estimator.add(neg(1000.5))
        estimator.remove(neg(1000.5))
        estimator.add(neg(3.0))
        estimator.remove(neg(3.0))
        assert estimator.snapshot() == before

    def test_negatives_never_change_compressed_size(self, make_estimator, rng):
        estimator = make_estimator("0.3")
        for _ in range(100):
            estimator.add(pos(rng.gauss(0, 1)))
        size = estimator.compressed_size()
        scores = [rng.gauss(0, 1) for _ in range(300)]
        for score in scores:
            estimator.add(neg(score))
            assert estimator.compressed_size() == size
        for score in scores:
            estimator.remove(neg(score))
            assert estimator.compressed_size() == size

    def test_removing_member_replaces_it_with_next_positive(self, make_estimator):
        estimator = make_estimator("0.5")
        for score in range(1, 30):
            estimator.add(pos(float(score)))
        tree = estimator.tree
        member = estimator.clist.next(estimator.clist.head)
        assert member.poslab == 1
        successor = tree.pos_list.next(member)
        before = {node.key: tree.head_stats(node.key)[0] for node in estimator.clist}
        removed_key = member.key

        estimator.remove(pos(removed_key.score))
        members = estimator.compressed_keys()
        assert removed_key not in members
        assert successor.key in members
        assert tree.head_stats(successor.key)[0] == before[removed_key]
        for key in members:
            if key in before:
                shift = 1 if removed_key < key else 0
                assert tree.head_stats(key)[0] == before[key] - shift
        assert estimator.verify_invariants().ok

    def test_single_add_next_repairs_gap_violation(self, make_estimator):
        estimator = uncompressed_run(make_estimator)
        estimator.compress()
        assert estimator.compressed_keys() == keys(1, 3)
        node1 = estimator.tree.find_score(1.0)

        # a new positive inside node1's gap pushes HP(node3) past alpha * (HP(node1) + 1)
        estimator.tree.add_tree_pos(1.5)
        estimator.clist.link(node1).gappos += 1
        report = estimator.verify_invariants()
        assert not report.ok
        assert "beyond alpha" in report.violation

        estimator.add_next(node1)
        assert estimator.compressed_keys() == keys(1, 1.5, 3)
        assert estimator.verify_invariants().ok

    def test_remove_unknown_positive(self, make_estimator):
        estimator = make_estimator("0.1")
        estimator.add(neg(1.0))
        with pytest.raises(WindowConsistencyError):
            estimator.remove(pos(1.0))


class TestGuarantees:

    @pytest.mark.parametrize("epsilon", ["0.1", "0.3", "0.9"])
    def test_invariants_hold_after_every_operation(self, make_estimator, rng, epsilon):
        estimator = make_estimator(epsilon)

        def check(est):
            report = est.verify_invariants()
            assert report.ok, report.violation

        random_ops(estimator, rng, 600, grid=rng.choice([0, 40]), check=check)

    def test_soak_mixed_operations(self, make_estimator):
        estimator = make_estimator("0.3")

        def check(est):
            report = est.verify_invariants()
            assert report.ok, report.violation

        random_ops(estimator, random.Random(8), 2000, grid=300, capacity=500, check=check)

    def test_exact_mode(self, make_estimator, rng):
        estimator = make_estimator("0")

        def check(est):
            assert est.estimate() == est.exact()

        random_ops(estimator, rng, 800, grid=50, check=check)

    def test_size_bound(self, make_estimator, rng):
        estimator = make_estimator("0.1")

        def check(est):
            assert est.compressed_size() <= size_bound(est.total_pos, 0.1)

        random_ops(estimator, rng, 1500, grid=0, positive_rate=0.7, capacity=1000, check=check)

    def test_flipped_mode_perfect_separation(self, make_estimator):
        estimator = make_estimator("0.5", flipped_mode=True)
        for score in range(20):
            estimator.add(pos(float(score)))
            estimator.add(neg(float(score) + 100.0))
        assert estimator.exact() == AucValue(Fraction(1))
        assert estimator.estimate() == AucValue(Fraction(1))

    def test_flipped_mode_guarantee(self, make_estimator, rng):
        estimator = make_estimator("0.3", flipped_mode=True)
        epsilon = Fraction(3, 10)

        def check(est):
            assert within_guarantee(est.estimate(), est.exact(), epsilon, flipped=True)

        random_ops(estimator, rng, 800, grid=0, check=check)
        assert estimator.verify_invariants().ok


class TestVerifyInvariants:

    def test_fresh_estimator(self, make_estimator):
        assert make_estimator("0.1").verify_invariants().ok

    def test_corrupted_gap_is_reported(self, make_estimator, rng):
        estimator = make_estimator("0.2")
        random_ops(estimator, rng, 100)
        estimator.clist.link(estimator.clist.head).gapneg += 1
        report = estimator.verify_invariants()
        assert not report.ok
        assert "gap" in report.violation
        assert not report

    def test_redundant_member_is_reported(self, make_estimator):
        estimator = uncompressed_run(make_estimator)
        estimator.compress()
        hidden = estimator.tree.find_score(2.0)
        assert hidden.key not in estimator.compressed_keys()
        estimator.clist.add(estimator.tree.find_score(1.0), hidden, 1, 0)
        report = estimator.verify_invariants()
        assert not report.ok
        assert "redundant" in report.violation

    def test_snapshot_is_deterministic(self, make_estimator):
        first, second = make_estimator("0.2"), make_estimator("0.2")
        random_ops(first, random.Random(4), 300)
        random_ops(second, random.Random(4), 300)
        assert first.snapshot() == second.snapshot()
        assert first.clist.name == COMPRESSED_LIST
