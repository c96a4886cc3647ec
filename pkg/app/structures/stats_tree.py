"""
Counter-augmented search tree over distinct scores.

StatsTree bundles three structures that are always updated together:
  - T, a red-black tree with per-node label counters and subtree totals;
  - TP, a red-black index over the positive nodes;
  - P, the weighted list of positive nodes.
Two sentinel nodes (MIN_KEY, MAX_KEY) with zero counters live in all three.
"""
from typing import Dict, List, Optional, Tuple

from app.core.errors import StructurePreconditionError, WindowConsistencyError
from app.models.events import MAX_KEY, MIN_KEY, AucValue, NodeKey, finite_key
from app.structures.red_black import RBNode, RedBlackTree
from app.structures.weighted_list import ListLink, WeightedList

POSITIVE_LIST = "P"


class StatsNode(RBNode):
    """Node of T: label counters at one score plus subtree aggregates."""
    __slots__ = ("poslab", "neglab", "accpos", "accneg", "links")

    def __init__(self, key: Optional[NodeKey]):
        super().__init__(key)
        self.poslab = 0
        self.neglab = 0
        self.accpos = 0
        self.accneg = 0
        self.links: Dict[str, ListLink] = {}

    def __repr__(self) -> str:
        return f"<StatsNode key={self.key} pos={self.poslab} neg={self.neglab}>"


class _IndexNode(RBNode):
    __slots__ = ("target",)

    def __init__(self, key: Optional[NodeKey]):
        super().__init__(key)
        self.target: Optional[StatsNode] = None


class _PositiveIndex(RedBlackTree[_IndexNode]):
    """TP: keys of positive nodes, each pointing at its StatsNode."""
    node_class = _IndexNode

    def add(self, node: StatsNode) -> None:
        entry, _ = self.insert(node.key)
        entry.target = node

    def discard(self, key: NodeKey) -> None:
        entry = self.find(key)
        if entry is not None:
            self.delete(entry)


class StatsTree(RedBlackTree[StatsNode]):
    """
    T with its companion index TP and positive list P.

    Every update runs in O(log k) where k is the number of live nodes.
    """

    node_class = StatsNode
    augmented = True

    def __init__(self):
        super().__init__()
        self.tp_index = _PositiveIndex()
        self.min_node, _ = self.insert(MIN_KEY)
        self.max_node, _ = self.insert(MAX_KEY)
        self.tp_index.add(self.min_node)
        self.tp_index.add(self.max_node)
        self.pos_list = WeightedList(POSITIVE_LIST, self.min_node, self.max_node)
        # 2 * (concordant pairs) + (tied pairs), kept current by every update
        self._doubled = 0

    # ------------------------------------------------------------------
    # AGGREGATES
    # ------------------------------------------------------------------

    def _refresh(self, node: StatsNode) -> None:
        node.accpos = node.poslab + node.left.accpos + node.right.accpos
        node.accneg = node.neglab + node.left.accneg + node.right.accneg

    def _bump(self, node: StatsNode, dpos: int, dneg: int) -> None:
        node.poslab += dpos
        node.neglab += dneg
        nil = self.nil
        while node is not nil:
            node.accpos += dpos
            node.accneg += dneg
            node = node.parent

    @property
    def total_pos(self) -> int:
        return self.root.accpos

    @property
    def total_neg(self) -> int:
        return self.root.accneg

    # ------------------------------------------------------------------
    # QUERIES
    # ------------------------------------------------------------------

    def find_score(self, score: float) -> Optional[StatsNode]:
        return self.find(finite_key(score))

    def head_stats(self, key: NodeKey) -> Tuple[int, int]:
        """
        Cumulative label counts strictly below key.

        Descends from the root; whenever the search moves right past a node,
        the node's left-subtree totals and its own counters are added.

        Args:
            key: Key of a live node

        Returns:
            (hp, hn) positives and negatives with keys < key
        """
        hp = hn = 0
        node = self.root
        nil = self.nil
        while node is not nil:
            if key < node.key:
                node = node.left
                continue
            hp += node.left.accpos
            hn += node.left.accneg
            if node.key == key:
                return hp, hn
            hp += node.poslab
            hn += node.neglab
            node = node.right
        raise StructurePreconditionError(f"head_stats: no node with key {key}")

    def max_pos_key(self, key: NodeKey) -> StatsNode:
        """Positive node (or lower sentinel) with the largest key <= key."""
        return self.tp_index.floor(key).target

    def max_pos(self, score: float) -> StatsNode:
        return self.max_pos_key(finite_key(score))

    def _positive_credit(self, node: StatsNode) -> int:
        """Doubled pair credit of one positive entry at node: 2 per negative above, 1 per tie."""
        _, hn = self.head_stats(node.key)
        return 2 * (self.total_neg - hn - node.neglab) + node.neglab

    def _negative_credit(self, node: StatsNode) -> int:
        """Doubled pair credit of one negative entry at node: 2 per positive below, 1 per tie."""
        hp, _ = self.head_stats(node.key)
        return 2 * hp + node.poslab

    # ------------------------------------------------------------------
    # UPDATES
    # ------------------------------------------------------------------

    def add_tree_pos(self, score: float) -> StatsNode:
        """
        Add one positive entry at score.

        Returns:
            The node holding score
        """
        key = finite_key(score)
        w = self.max_pos_key(key)
        v, _ = self.insert(key)
        self._bump(v, 1, 0)
        self._doubled += self._positive_credit(v)
        if w is v:
            v.links[POSITIVE_LIST].gappos += 1
            return v

        # v is newly positive and lands in w's P-gap
        self.tp_index.add(v)
        w.links[POSITIVE_LIST].gappos += 1
        _, n1 = self.head_stats(w.key)
        _, n2 = self.head_stats(v.key)
        self.pos_list.add(w, v, w.poslab, n2 - n1)
        return v

    def remove_tree_pos(self, score: float) -> None:
        key = finite_key(score)
        v = self.find(key)
        if v is None or v.poslab == 0:
            raise WindowConsistencyError(f"no positive entry with score {score!r}")

        self._doubled -= self._positive_credit(v)
        self._bump(v, -1, 0)
        v.links[POSITIVE_LIST].gappos -= 1
        if v.poslab == 0:
            self.pos_list.remove(v)
            self.tp_index.discard(key)
            if v.neglab == 0:
                self.delete(v)

    def add_tree_neg(self, score: float) -> StatsNode:
        key = finite_key(score)
        v, _ = self.insert(key)
        self._bump(v, 0, 1)
        self._doubled += self._negative_credit(v)
        self.max_pos_key(key).links[POSITIVE_LIST].gapneg += 1
        return v

    def remove_tree_neg(self, score: float) -> None:
        key = finite_key(score)
        v = self.find(key)
        if v is None or v.neglab == 0:
            raise WindowConsistencyError(f"no negative entry with score {score!r}")

        self._doubled -= self._negative_credit(v)
        self._bump(v, 0, -1)
        self.max_pos_key(key).links[POSITIVE_LIST].gapneg -= 1
        if v.poslab == 0 and v.neglab == 0:
            self.delete(v)

    # ------------------------------------------------------------------
    # EXACT AUC AND DIAGNOSTICS
    # ------------------------------------------------------------------

    def auc(self) -> AucValue:
        """Exact AUC from the incrementally maintained pair count, O(1)."""
        return AucValue.from_counts(self._doubled, self.total_pos, self.total_neg)

    def _traversal_sum(self) -> int:
        hp = 0
        doubled = 0
        for node in self.nodes():
            p = node.poslab
            doubled += (2 * hp + p) * node.neglab
            hp += p
        return doubled

    def exact_auc(self) -> AucValue:
        """AUC over the whole tree by one in-order pass, O(k)."""
        return AucValue.from_counts(self._traversal_sum(), self.total_pos, self.total_neg)

    def head_counts(self) -> Dict[NodeKey, Tuple[int, int]]:
        """(HP, HN) for every live key, computed in one in-order pass."""
        heads: Dict[NodeKey, Tuple[int, int]] = {}
        hp = hn = 0
        for node in self.nodes():
            heads[node.key] = (hp, hn)
            hp += node.poslab
            hn += node.neglab
        return heads

    def counts(self) -> List[Tuple[NodeKey, int, int]]:
        """(key, poslab, neglab) for every live node in key order."""
        return [(node.key, node.poslab, node.neglab) for node in self.nodes()]

    def check_structure(self, heads: Optional[Dict[NodeKey, Tuple[int, int]]] = None) -> Optional[str]:
        """
        Recompute T, TP and P invariants from first principles.

        Returns:
            Description of the first violation, or None
        """
        problem = self.check_balance()
        if problem:
            return f"T: {problem}"
        problem = self.tp_index.check_balance()
        if problem:
            return f"TP: {problem}"

        def _sums(node: StatsNode) -> Tuple[int, int]:
            if node is self.nil:
                return 0, 0
            lp, ln = _sums(node.left)
            rp, rn = _sums(node.right)
            pos, neg = node.poslab + lp + rp, node.neglab + ln + rn
            if (pos, neg) != (node.accpos, node.accneg):
                raise _Mismatch(
                    f"subtree aggregates at {node.key}: stored ({node.accpos}, {node.accneg}), "
                    f"actual ({pos}, {neg})"
                )
            return pos, neg

        try:
            _sums(self.root)
        except _Mismatch as e:
            return str(e)

        for node in self.nodes():
            if node.key.is_sentinel:
                if node.poslab or node.neglab:
                    return f"sentinel {node.key} carries labels"
            elif node.poslab + node.neglab < 1:
                return f"empty node {node.key} left in T"
            positive = node.poslab > 0 or node.key.is_sentinel
            if positive != (node in self.pos_list):
                return f"P membership wrong for {node.key}"
            entry = self.tp_index.find(node.key)
            if positive != (entry is not None and entry.target is node):
                return f"TP membership wrong for {node.key}"
        if len(self.tp_index) != len(self.pos_list):
            return "TP and P sizes differ"
        if self._doubled != self._traversal_sum():
            return "incremental pair count differs from traversal"

        heads = heads if heads is not None else self.head_counts()
        return check_list_gaps(self.pos_list, heads, (self.total_pos, self.total_neg))


class _Mismatch(Exception):
    pass


def check_list_gaps(lst: WeightedList, heads: Dict[NodeKey, Tuple[int, int]],
                    totals: Tuple[int, int]) -> Optional[str]:
    """
    Compare every member's gap counters with head-count differences.

    Args:
        lst: Weighted list whose members are live tree nodes
        heads: (HP, HN) per key, as from StatsTree.head_counts
        totals: (total_pos, total_neg) of the tree

    Returns:
        Description of the first violation, or None
    """
    members = list(lst)
    if members[0] is not lst.head or members[-1] is not lst.tail:
        return f"{lst.name}: sentinels are not the first and last members"
    if len(members) != len(lst):
        return f"{lst.name}: size counter {len(lst)} but {len(members)} members"
    for u, v in zip(members, members[1:]):
        if not u.key < v.key:
            return f"{lst.name}: members out of order at {u.key}"
        if u.key not in heads or v.key not in heads:
            return f"{lst.name}: member missing from T"
        expected = (heads[v.key][0] - heads[u.key][0], heads[v.key][1] - heads[u.key][1])
        if lst.gaps(u) != expected:
            return f"{lst.name}: gap of {u.key} is {lst.gaps(u)}, expected {expected}"
    if lst.gaps(lst.tail) != (0, 0):
        return f"{lst.name}: upper sentinel carries a gap"
    if lst.totals() != totals:
        return f"{lst.name}: gap totals {lst.totals()} differ from tree totals {totals}"
    return None
