"""
Rotation-based red-black tree with a subtree-aggregate refresh hook.

Subclasses that keep per-subtree counters override `_refresh`; rotations call
it for exactly the two rotated nodes, and structural deletion refreshes the
spliced path before rebalancing. Nodes are relinked, never copied, so outside
references to a node stay valid for as long as the node is in the tree.
"""
from typing import Generic, Iterator, Optional, Type, TypeVar

from app.models.events import NodeKey

RED = True
BLACK = False


class RBNode:
    """Tree node. Subclasses add payload slots."""
    __slots__ = ("key", "red", "left", "right", "parent")

    def __init__(self, key: Optional[NodeKey]):
        self.key = key
        self.red = BLACK
        self.left: "RBNode" = None  # type: ignore[assignment]
        self.right: "RBNode" = None  # type: ignore[assignment]
        self.parent: "RBNode" = None  # type: ignore[assignment]


N = TypeVar("N", bound=RBNode)


class RedBlackTree(Generic[N]):
    """Red-black search tree over unique NodeKeys."""

    node_class: Type[RBNode] = RBNode
    augmented = False

    def __init__(self):
        self.nil: N = self.node_class(None)  # type: ignore[assignment]
        self.nil.left = self.nil
        self.nil.right = self.nil
        self.nil.parent = self.nil
        self.root: N = self.nil
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[N]:
        return self.nodes()

    # ------------------------------------------------------------------
    # QUERIES
    # ------------------------------------------------------------------

    def find(self, key: NodeKey) -> Optional[N]:
        current = self.root
        nil = self.nil
        while current is not nil:
            if key < current.key:
                current = current.left
            elif current.key < key:
                current = current.right
            else:
                return current
        return None

    def floor(self, key: NodeKey) -> Optional[N]:
        """Node with the largest key <= key."""
        current = self.root
        nil = self.nil
        candidate = None
        while current is not nil:
            if key < current.key:
                current = current.left
            else:
                candidate = current
                current = current.right
        return candidate

    def nodes(self) -> Iterator[N]:
        """In-order traversal without recursion."""
        stack = []
        current = self.root
        nil = self.nil
        while stack or current is not nil:
            while current is not nil:
                stack.append(current)
                current = current.left
            current = stack.pop()
            yield current
            current = current.right

    def height(self) -> int:
        def _height(node: RBNode) -> int:
            if node is self.nil:
                return 0
            return 1 + max(_height(node.left), _height(node.right))
        return _height(self.root)

    def check_balance(self) -> Optional[str]:
        """
        Verify red-black properties and key order.

        Returns:
            Description of the first violation, or None
        """
        if self.root.red:
            return "root is red"

        def _walk(node: RBNode, low: Optional[NodeKey], high: Optional[NodeKey]):
            if node is self.nil:
                return 1, None
            if (low is not None and not low < node.key) or (high is not None and not node.key < high):
                return 0, f"key order violated at {node.key}"
            if node.red and (node.left.red or node.right.red):
                return 0, f"red node {node.key} has a red child"
            left_black, problem = _walk(node.left, low, node.key)
            if problem:
                return 0, problem
            right_black, problem = _walk(node.right, node.key, high)
            if problem:
                return 0, problem
            if left_black != right_black:
                return 0, f"black height mismatch below {node.key}"
            return left_black + (0 if node.red else 1), None

        _, problem = _walk(self.root, None, None)
        return problem

    # ------------------------------------------------------------------
    # MUTATION
    # ------------------------------------------------------------------

    def insert(self, key: NodeKey) -> "tuple[N, bool]":
        """
        Find the node for key, creating it if absent.

        Returns:
            (node, created) tuple
        """
        nil = self.nil
        parent = nil
        current = self.root
        while current is not nil:
            parent = current
            if key < current.key:
                current = current.left
            elif current.key < key:
                current = current.right
            else:
                return current, False

        node = self.node_class(key)
        node.left = nil
        node.right = nil
        node.parent = parent
        node.red = RED
        if parent is nil:
            self.root = node
        elif key < parent.key:
            parent.left = node
        else:
            parent.right = node

        self._size += 1
        self._insert_fixup(node)
        return node, True  # type: ignore[return-value]

    def delete(self, z: N) -> None:
        """Unlink node z and rebalance."""
        nil = self.nil
        y = z
        y_original_red = y.red
        if z.left is nil:
            x = z.right
            self._transplant(z, z.right)
        elif z.right is nil:
            x = z.left
            self._transplant(z, z.left)
        else:
            y = self._min_node(z.right)
            y_original_red = y.red
            x = y.right
            if y.parent is z:
                x.parent = y
            else:
                self._transplant(y, y.right)
                y.right = z.right
                y.right.parent = y
            self._transplant(z, y)
            y.left = z.left
            y.left.parent = y
            y.red = z.red

        # aggregates must be exact before rotations rely on them
        if self.augmented:
            self._refresh_upward(x.parent)
        if not y_original_red:
            self._delete_fixup(x)
        self._size -= 1
        z.left = z.right = z.parent = nil

    # ------------------------------------------------------------------
    # INTERNALS
    # ------------------------------------------------------------------

    def _refresh(self, node: N) -> None:
        """Recompute node's aggregates from its children."""

    def _refresh_upward(self, node: N) -> None:
        nil = self.nil
        while node is not nil:
            self._refresh(node)
            node = node.parent

    def _min_node(self, node: N) -> N:
        while node.left is not self.nil:
            node = node.left
        return node

    def _transplant(self, u: N, v: N) -> None:
        if u.parent is self.nil:
            self.root = v
        elif u is u.parent.left:
            u.parent.left = v
        else:
            u.parent.right = v
        v.parent = u.parent

    def _rotate_left(self, x: N) -> None:
        y = x.right
        x.right = y.left
        if y.left is not self.nil:
            y.left.parent = x
        y.parent = x.parent
        if x.parent is self.nil:
            self.root = y
        elif x is x.parent.left:
            x.parent.left = y
        else:
            x.parent.right = y
        y.left = x
        x.parent = y
        if self.augmented:
            self._refresh(x)
            self._refresh(y)

    def _rotate_right(self, y: N) -> None:
        x = y.left
        y.left = x.right
        if x.right is not self.nil:
            x.right.parent = y
        x.parent = y.parent
        if y.parent is self.nil:
            self.root = x
        elif y is y.parent.right:
            y.parent.right = x
        else:
            y.parent.left = x
        x.right = y
        y.parent = x
        if self.augmented:
            self._refresh(y)
            self._refresh(x)

    def _insert_fixup(self, z: N) -> None:
        while z.parent.red:
            if z.parent is z.parent.parent.left:
                y = z.parent.parent.right
                if y.red:
                    z.parent.red = BLACK
                    y.red = BLACK
                    z.parent.parent.red = RED
                    z = z.parent.parent
                else:
                    if z is z.parent.right:
                        z = z.parent
                        self._rotate_left(z)
                    z.parent.red = BLACK
                    z.parent.parent.red = RED
                    self._rotate_right(z.parent.parent)
            else:
                y = z.parent.parent.left
                if y.red:
                    z.parent.red = BLACK
                    y.red = BLACK
                    z.parent.parent.red = RED
                    z = z.parent.parent
                else:
                    if z is z.parent.left:
                        z = z.parent
                        self._rotate_right(z)
                    z.parent.red = BLACK
                    z.parent.parent.red = RED
                    self._rotate_left(z.parent.parent)
        self.root.red = BLACK

    def _delete_fixup(self, x: N) -> None:
        while x is not self.root and not x.red:
            if x is x.parent.left:
                w = x.parent.right
                if w.red:
                    w.red = BLACK
                    x.parent.red = RED
                    self._rotate_left(x.parent)
                    w = x.parent.right
                if not w.left.red and not w.right.red:
                    w.red = RED
                    x = x.parent
                else:
                    if not w.right.red:
                        w.left.red = BLACK
                        w.red = RED
                        self._rotate_right(w)
                        w = x.parent.right
                    w.red = x.parent.red
                    x.parent.red = BLACK
                    w.right.red = BLACK
                    self._rotate_left(x.parent)
                    x = self.root
            else:
                w = x.parent.left
                if w.red:
                    w.red = BLACK
                    x.parent.red = RED
                    self._rotate_right(x.parent)
                    w = x.parent.left
                if not w.right.red and not w.left.red:
                    w.red = RED
                    x = x.parent
                else:
                    if not w.left.red:
                        w.right.red = BLACK
                        w.red = RED
                        self._rotate_left(w)
                        w = x.parent.left
                    w.red = x.parent.red
                    x.parent.red = BLACK
                    w.left.red = BLACK
                    self._rotate_right(x.parent)
                    x = self.root
        x.red = BLACK
