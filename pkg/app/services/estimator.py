"""
Approximate AUC over a compressed weighted list.

CompressedAuc keeps a list C over a subset of the positive nodes such that,
for consecutive members v, w and w's successor u,

    HP(w) <= alpha * (HP(v) + poslab(v))      (gaps grow head counts by at most alpha)
    HP(u) >  alpha * (HP(v) + poslab(v))      (two gaps together always exceed alpha)

with alpha = 1 + epsilon. Grouping the nodes between members then bounds the
relative error of the estimate by epsilon / 2, while |C| stays in
O(log k / epsilon).
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from app.core.errors import WindowConsistencyError
from app.core.oracle import within_guarantee
from app.models.events import AucValue, LabeledScore, NodeKey, finite_key
from app.models.schemas import EstimatorConfig
from app.structures.stats_tree import StatsNode, StatsTree, check_list_gaps
from app.structures.weighted_list import WeightedList

logger = logging.getLogger(__name__)

COMPRESSED_LIST = "C"


@dataclass(frozen=True)
class InvariantReport:
    """Outcome of a full invariant check."""
    ok: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def size_bound(total_pos: int, epsilon: float) -> float:
    """Upper bound on |C| for a (1 + epsilon)-compressed list, epsilon > 0."""
    return 2 * math.log(max(total_pos, 2)) / math.log(1 + epsilon) + 6


def approx_auc(lst: WeightedList, total_pos: int, total_neg: int) -> AucValue:
    """
    AUC computed over a gap-consistent weighted list.

    Each member contributes its own counters, then the nodes strictly inside
    its gap are treated as one grouped node. Exact when the list holds every
    positive node.

    Args:
        lst: Weighted list whose gaps match the tree
        total_pos: Positive labels in the tree
        total_neg: Negative labels in the tree

    Returns:
        AucValue, undefined when either class is absent
    """
    name = lst.name
    hp = 0
    doubled = 0
    node: Optional[StatsNode] = lst.head
    while node is not None:
        link = node.links[name]
        p = node.poslab
        n = node.neglab
        doubled += (2 * hp + p) * n
        hp += p
        p = link.gappos - p
        n = link.gapneg - n
        doubled += (2 * hp + p) * n
        hp += p
        node = link.next
    return AucValue.from_counts(doubled, total_pos, total_neg)


class CompressedAuc:
    """
    Estimator state: the tree structures T, TP, P plus the compressed list C.

    In flipped mode a second, label-inverted instance is fed the same
    entries and the estimate becomes 1 - (its estimate).
    """

    def __init__(self, config: Optional[EstimatorConfig] = None):
        """
        Initialize an empty estimator.

        Args:
            config: Compression settings. Defaults to epsilon = 0.1, not flipped
        """
        self.config = config or EstimatorConfig()
        alpha = self.config.alpha
        self._alpha_num = alpha.numerator
        self._alpha_den = alpha.denominator
        self.tree = StatsTree()
        self.clist = WeightedList(COMPRESSED_LIST, self.tree.min_node, self.tree.max_node)
        self._flipped: Optional[CompressedAuc] = None
        if self.config.flipped_mode:
            self._flipped = CompressedAuc(self.config.model_copy(update={"flipped_mode": False}))
        logger.debug(f"CompressedAuc initialized with epsilon={self.config.epsilon}, "
                     f"flipped_mode={self.config.flipped_mode}")

    @property
    def epsilon(self) -> float:
        return float(self.config.epsilon)

    @property
    def total_pos(self) -> int:
        return self.tree.total_pos

    @property
    def total_neg(self) -> int:
        return self.tree.total_neg

    def compressed_size(self) -> int:
        """|C| including both sentinels."""
        return len(self.clist)

    # ------------------------------------------------------------------
    # EVENT INTERFACE
    # ------------------------------------------------------------------

    def add(self, event: LabeledScore) -> None:
        if event.is_positive:
            self.add_pos(event.score)
        else:
            self.add_neg(event.score)
        if self._flipped is not None:
            self._flipped.add(event.flipped())

    def remove(self, event: LabeledScore) -> None:
        if event.is_positive:
            self.remove_pos(event.score)
        else:
            self.remove_neg(event.score)
        if self._flipped is not None:
            self._flipped.remove(event.flipped())

    # ------------------------------------------------------------------
    # ESTIMATES
    # ------------------------------------------------------------------

    def approx_auc(self, lst: Optional[WeightedList] = None) -> AucValue:
        """ApproxAUC over lst (C by default)."""
        return approx_auc(lst if lst is not None else self.clist, self.total_pos, self.total_neg)

    def estimate(self) -> AucValue:
        """Approximate AUC of the current contents."""
        if self._flipped is not None:
            return self._flipped.approx_auc().complement()
        return self.approx_auc()

    def exact(self) -> AucValue:
        """Exact AUC of the current contents, maintained alongside T."""
        return self.tree.auc()

    # ------------------------------------------------------------------
    # LIST MAINTENANCE
    # ------------------------------------------------------------------

    def _exceeds(self, head: int, base: int) -> bool:
        """head > alpha * base, in integers."""
        return head * self._alpha_den > self._alpha_num * base

    def _locate(self, key: NodeKey) -> Tuple[StatsNode, int]:
        """
        Member of C with the largest key <= key, by linear scan.

        Returns:
            (member, HP(member))
        """
        name = COMPRESSED_LIST
        node = self.clist.head
        head_pos = 0
        link = node.links[name]
        while link.next.key <= key:
            head_pos += link.gappos
            node = link.next
            link = node.links[name]
        return node, head_pos

    def add_next(self, v: StatsNode) -> None:
        """Add the successor of v in P to C, unless it is already there."""
        pos_list = self.tree.pos_list
        w = pos_list.next(v)
        if w is None or w in self.clist:
            return
        p, n = pos_list.gaps(v)
        self.clist.add(v, w, p, n)

    def compress(self) -> None:
        """
        Delete members whose removal keeps every gap within alpha.

        Assumes the pair condition already holds; afterwards the triple
        condition holds as well.
        """
        name = COMPRESSED_LIST
        v = self.clist.head
        head_pos = 0
        while True:
            v_link = v.links[name]
            w = v_link.next
            if w is None:
                break
            w_link = w.links[name]
            if w_link.next is None:
                break
            if not self._exceeds(head_pos + v_link.gappos + w_link.gappos, head_pos + v.poslab):
                self.clist.remove(w)
            else:
                head_pos += v_link.gappos
                v = w

    def add_pos(self, score: float) -> None:
        """Add a positive entry and restore compression."""
        v = self.tree.add_tree_pos(score)
        u, head_pos = self._locate(v.key)
        link = self.clist.link(u)
        link.gappos += 1
        if self._exceeds(head_pos + link.gappos, head_pos + u.poslab):
            self.add_next(u)
        self.compress()

    def remove_pos(self, score: float) -> None:
        """Remove a positive entry and restore compression."""
        key = finite_key(score)
        node = self.tree.find(key)
        if node is None or node.poslab == 0:
            raise WindowConsistencyError(f"no positive entry with score {score!r}")

        u, _ = self._locate(key)
        if u is node and node.poslab == 1:
            # u is about to leave P: replace it by the next positive node,
            # which inherits u's head count
            self.add_next(u)
            predecessor = self.clist.prev(u)
            self.clist.remove(u)
            u = predecessor
        self.clist.link(u).gappos -= 1
        self.tree.remove_tree_pos(score)

        name = COMPRESSED_LIST
        v = self.clist.head
        head_pos = 0
        while True:
            link = v.links[name]
            w = link.next
            if w is None:
                break
            gap = link.gappos
            if self._exceeds(head_pos + gap, head_pos + v.poslab):
                self.add_next(v)
            head_pos += gap
            v = w
        self.compress()

    def add_neg(self, score: float) -> None:
        v = self.tree.add_tree_neg(score)
        u, _ = self._locate(v.key)
        self.clist.link(u).gapneg += 1

    def remove_neg(self, score: float) -> None:
        self.tree.remove_tree_neg(score)
        u, _ = self._locate(finite_key(score))
        self.clist.link(u).gapneg -= 1

    # ------------------------------------------------------------------
    # DIAGNOSTICS
    # ------------------------------------------------------------------

    def verify_invariants(self) -> InvariantReport:
        """
        Recompute every structural and accuracy invariant from scratch.

        O(k); meant for tests and debug runs. Never raises.
        """
        try:
            problem = self._first_violation()
        except Exception as e:  # a corrupted structure can break traversal itself
            problem = f"check aborted: {e!r}"
        if problem is None and self._flipped is not None:
            report = self._flipped.verify_invariants()
            if not report.ok:
                problem = f"flipped twin: {report.violation}"
        if problem is not None:
            logger.warning(f"Invariant violated: {problem}")
            return InvariantReport(False, problem)
        return InvariantReport(True)

    def _first_violation(self) -> Optional[str]:
        tree = self.tree
        heads = tree.head_counts()
        problem = tree.check_structure(heads)
        if problem:
            return problem

        for node in self.clist:
            if node not in tree.pos_list:
                return f"C member {node.key} is not in P"
        problem = check_list_gaps(self.clist, heads, (tree.total_pos, tree.total_neg))
        if problem:
            return problem

        members = list(self.clist)
        for v, w in zip(members, members[1:]):
            if self._exceeds(heads[w.key][0], heads[v.key][0] + v.poslab):
                return f"gap after {v.key} grows head count beyond alpha"
        for v, u in zip(members, members[2:]):
            if not self._exceeds(heads[u.key][0], heads[v.key][0] + v.poslab):
                return f"members after {v.key} are redundant"

        if self.config.epsilon > 0:
            bound = size_bound(tree.total_pos, self.epsilon)
            if len(members) > bound:
                return f"|C| = {len(members)} exceeds size bound {bound:.2f}"

        exact = self.exact()
        own = self.approx_auc()
        if not within_guarantee(own, exact, self.config.alpha - 1):
            return f"estimate {own.value} outside epsilon/2 of exact {exact.value}"
        if self._flipped is not None:
            if not within_guarantee(self.estimate(), exact, self.config.alpha - 1, flipped=True):
                return f"flipped estimate {self.estimate().value} outside (1 - auc) * epsilon/2 of {exact.value}"
        return None

    def snapshot(self) -> Dict[str, Any]:
        """Deterministic description of T, P and C for equality checks."""
        return {
            "tree": self.tree.counts(),
            "positive_list": [(node.key, self.tree.pos_list.gaps(node)) for node in self.tree.pos_list],
            "compressed_list": [(node.key, self.clist.gaps(node)) for node in self.clist],
        }

    def compressed_keys(self) -> List[NodeKey]:
        return [node.key for node in self.clist]
