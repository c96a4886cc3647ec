"""
Tests for the red-black tree.
"""
import random

from app.models.events import finite_key
from app.structures.red_black import RedBlackTree


def test_insert_find_floor():
    tree = RedBlackTree()
    for score in [5.0, 1.0, 3.0]:
        tree.insert(finite_key(score))
    node, created = tree.insert(finite_key(3.0))
    assert not created
    assert node.key == finite_key(3.0)
    assert len(tree) == 3
    assert tree.find(finite_key(2.0)) is None
    assert tree.floor(finite_key(2.0)).key == finite_key(1.0)
    assert tree.floor(finite_key(5.0)).key == finite_key(5.0)
    assert tree.floor(finite_key(0.0)) is None


def test_random_inserts_and_deletes_stay_balanced():
    rng = random.Random(11)
    tree = RedBlackTree()
    live = set()
    for _ in range(3000):
        score = float(rng.randrange(400))
        key = finite_key(score)
        if key in live and rng.random() < 0.6:
            tree.delete(tree.find(key))
            live.discard(key)
        else:
            tree.insert(key)
            live.add(key)
        assert tree.check_balance() is None
    assert [n.key for n in tree.nodes()] == sorted(live)
    assert len(tree) == len(live)


def test_height_is_logarithmic():
    tree = RedBlackTree()
    for score in range(1024):
        tree.insert(finite_key(float(score)))
    # red-black height bound 2 * log2(n + 1)
    assert tree.height() <= 2 * 11
    assert tree.check_balance() is None


def test_deleted_node_is_detached():
    tree = RedBlackTree()
    for score in range(10):
        tree.insert(finite_key(float(score)))
    victim = tree.find(finite_key(4.0))
    tree.delete(victim)
    assert victim.parent is tree.nil
    assert tree.find(finite_key(4.0)) is None
    assert tree.find(finite_key(5.0)) is not None
