"""
Weighted linked list over tree nodes.

Each member u stores the positive/negative label totals over the half-open
key interval [key(u), key(next(u))), its gap counters. A node may belong to
several lists at once; its per-list link lives in `node.links[list.name]`.
"""
from typing import Dict, Iterator, Optional, Protocol

from app.core.errors import ListConsistencyError
from app.models.events import NodeKey


class ListMember(Protocol):
    key: NodeKey
    links: Dict[str, "ListLink"]
    poslab: int
    neglab: int


class ListLink:
    """Per-list neighbour pointers and gap counters of one member."""
    __slots__ = ("next", "prev", "gappos", "gapneg")

    def __init__(self, gappos: int = 0, gapneg: int = 0):
        self.next: Optional[ListMember] = None
        self.prev: Optional[ListMember] = None
        self.gappos = gappos
        self.gapneg = gapneg

    def __repr__(self) -> str:
        return f"<ListLink gappos={self.gappos} gapneg={self.gapneg}>"


class WeightedList:
    """
    Doubly linked list anchored by two permanent sentinel members.

    Splicing and unlinking are O(1); the caller supplies the label totals
    needed to split a gap.
    """

    def __init__(self, name: str, head: ListMember, tail: ListMember,
                 gappos: int = 0, gapneg: int = 0):
        """
        Args:
            name: List identity, the key of this list's link on every member
            head: Lower sentinel
            tail: Upper sentinel
            gappos: Initial positive gap of the head (all positives in the tree)
            gapneg: Initial negative gap of the head
        """
        self.name = name
        self.head = head
        self.tail = tail
        head_link = ListLink(gappos, gapneg)
        tail_link = ListLink()
        head_link.next = tail
        tail_link.prev = head
        head.links[name] = head_link
        tail.links[name] = tail_link
        self._size = 2

    def __len__(self) -> int:
        return self._size

    def __contains__(self, node: ListMember) -> bool:
        return self.name in node.links

    def __iter__(self) -> Iterator[ListMember]:
        name = self.name
        node: Optional[ListMember] = self.head
        while node is not None:
            yield node
            node = node.links[name].next

    def link(self, node: ListMember) -> ListLink:
        return node.links[self.name]

    def next(self, node: ListMember) -> Optional[ListMember]:
        return node.links[self.name].next

    def prev(self, node: ListMember) -> Optional[ListMember]:
        return node.links[self.name].prev

    def gaps(self, node: ListMember) -> "tuple[int, int]":
        link = node.links[self.name]
        return link.gappos, link.gapneg

    def add(self, u: ListMember, v: ListMember, p: int, n: int) -> None:
        """
        Splice v after u.

        Args:
            u: Current member
            v: Node to insert, strictly between u and u's successor
            p: Positive labels over keys in [key(u), key(v))
            n: Negative labels over keys in [key(u), key(v))
        """
        name = self.name
        if name not in u.links:
            raise ListConsistencyError(f"{name}: anchor {u.key} is not a member")
        if name in v.links:
            raise ListConsistencyError(f"{name}: {v.key} is already a member")
        u_link = u.links[name]
        successor = u_link.next
        if successor is None or not (u.key < v.key < successor.key):
            raise ListConsistencyError(f"{name}: {v.key} does not fit after {u.key}")
        if p > u_link.gappos or n > u_link.gapneg or p < 0 or n < 0:
            raise ListConsistencyError(
                f"{name}: split ({p}, {n}) exceeds gap ({u_link.gappos}, {u_link.gapneg}) of {u.key}"
            )

        v_link = ListLink(u_link.gappos - p, u_link.gapneg - n)
        v_link.prev = u
        v_link.next = successor
        successor.links[name].prev = v
        u_link.next = v
        u_link.gappos = p
        u_link.gapneg = n
        v.links[name] = v_link
        self._size += 1

    def remove(self, v: ListMember) -> None:
        """Unlink v; its gap merges into its predecessor's."""
        name = self.name
        if v is self.head or v is self.tail:
            raise ListConsistencyError(f"{name}: sentinels cannot be removed")
        v_link = v.links.pop(name, None)
        if v_link is None:
            raise ListConsistencyError(f"{name}: {v.key} is not a member")

        prev_link = v_link.prev.links[name]
        prev_link.gappos += v_link.gappos
        prev_link.gapneg += v_link.gapneg
        prev_link.next = v_link.next
        v_link.next.links[name].prev = v_link.prev
        self._size -= 1

    def totals(self) -> "tuple[int, int]":
        """Sum of gap counters over all members."""
        pos = neg = 0
        for node in self:
            link = node.links[self.name]
            pos += link.gappos
            neg += link.gapneg
        return pos, neg
