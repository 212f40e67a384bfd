import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nwproofs.trees import (
    EPSILON,
    STAR,
    GappedChildren,
    NotPrefixClosed,
    StarNotLeaf,
    TreeNW,
    ViolatedRootLabel,
    disjoint,
    format_word,
    nw_leaves,
    parse_word,
    prefix_le,
    proper_nodes,
    validate_tree_nw,
    word_of,
)

words = st.lists(st.integers(min_value=0, max_value=5), max_size=6).map(tuple)


def test_prefix_examples():
    assert prefix_le((), (0, 1))
    assert prefix_le((0, 1), (0, 1))
    assert not prefix_le((1,), (0, 1))


def test_disjoint_examples():
    assert disjoint((0,), (1,))
    assert not disjoint((0,), (0, 1))
    assert not disjoint((), ())


@given(words, words, words)
def test_prefix_partial_order(w, v, u):
    assert prefix_le(w, w)
    if prefix_le(w, v) and prefix_le(v, w):
        assert w == v
    if prefix_le(w, v) and prefix_le(v, u):
        assert prefix_le(w, u)


@given(words, words)
def test_disjoint_is_no_common_upper_bound(w, v):
    assert disjoint(w, v) == (not prefix_le(w, v) and not prefix_le(v, w))


def test_word_of_examples():
    assert word_of(()) == EPSILON
    assert word_of(((0, 1), (2,))) == (0, 1, 2)
    assert word_of(((5,),)) == (5,)


@given(st.lists(st.lists(st.integers(0, 3), min_size=1, max_size=3).map(tuple), max_size=4).map(tuple), words)
def test_word_of_append(path, w):
    assert word_of(path + (w,)) == word_of(path) + w


def test_validate_single_node():
    t = validate_tree_nw({EPSILON: "a"})
    assert t.nodes == {EPSILON}
    assert t.height == 0


def test_validate_root_star_rejected():
    with pytest.raises(ViolatedRootLabel):
        validate_tree_nw({EPSILON: STAR})


def test_validate_star_must_be_leaf():
    with pytest.raises(StarNotLeaf) as err:
        validate_tree_nw({EPSILON: "a", (0,): STAR, (0, 0): "a"})
    assert err.value.node == (0,)


def test_validate_prefix_closure():
    with pytest.raises(NotPrefixClosed):
        validate_tree_nw({EPSILON: "a", (0, 0): "b"})


def test_validate_gapped_children():
    with pytest.raises(GappedChildren):
        validate_tree_nw({EPSILON: "a", (1,): "b"})


def test_leaf_partition_examples():
    t = validate_tree_nw({EPSILON: "a", (0,): STAR})
    assert nw_leaves(t) == {(0,)}
    assert proper_nodes(t) == {EPSILON}

    t2 = validate_tree_nw({EPSILON: "a"})
    assert nw_leaves(t2) == frozenset()
    assert proper_nodes(t2) == {EPSILON}

    t3 = validate_tree_nw({EPSILON: "a", (0,): STAR, (1,): "b"})
    assert nw_leaves(t3) == {(0,)}
    assert proper_nodes(t3) == {EPSILON, (1,)}


def test_leaf_partition_is_a_partition():
    rng = random.Random(7)
    from conftest import random_tree_nw

    for _ in range(100):
        t = random_tree_nw(rng)
        assert t.nw_leaves | t.proper_nodes == t.nodes
        assert not (t.nw_leaves & t.proper_nodes)


def test_tree_equality_and_hash():
    a = TreeNW({EPSILON: "a", (0,): STAR})
    b = TreeNW({(0,): STAR, EPSILON: "a"})
    assert a == b and hash(a) == hash(b)
    assert a != TreeNW({EPSILON: "a"})


def test_subtree_labels():
    t = TreeNW({EPSILON: "a", (0,): "b", (0, 0): STAR, (1,): "c"})
    assert t.subtree_labels((0,)) == {EPSILON: "b", (0,): STAR}


@given(words)
def test_word_text_round_trip(w):
    assert parse_word(format_word(w)) == w
