import itertools
import math

import pytest
from hypothesis import given

from dendroidal.trees import (Tree, TermError, TreeError, automorphism_count, canonical_code, classify_edges,
                              corolla, edge_leq, enumerate_trees, eta, graft, is_isomorphic, linear_tree,
                              parse_edge, parse_term, relabel, to_term)

from conftest import E, F, G, H
from strategies import terms


def brute_automorphisms(t: Tree) -> int:
    """Edge permutations fixing the root and preserving parents and vertices."""
    count = 0
    for perm in itertools.permutations(t.edges):
        m = dict(zip(t.edges, perm))
        if (m[t.root] == t.root and all(t.is_vertex(e) == t.is_vertex(m[e]) for e in t.edges)
                and all(m[t.parent(e)] == t.parent(m[e]) for e in t.edges if e != t.root)):
            count += 1
    return count


def all_terms(max_vertices: int, max_arity: int) -> set:
    """Every tree term up to isomorphism, by direct recursion on the root."""

    def build(budget):
        out = {("eta", 0)}
        if budget == 0:
            return out
        for arity in range(max_arity + 1):
            for kids in itertools.product(build(budget - 1), repeat=arity):
                used = 1 + sum(v for _, v in kids)
                if used <= budget:
                    out.add(("v[" + ",".join(sorted(k for k, _ in kids)) + "]", used))
        return out

    return {canonical_code(parse_term(t)) for t, _ in build(max_vertices)}


def test_eta_and_corolla():
    assert (len(eta().edges), len(eta().vertices)) == (1, 0)
    c4 = corolla(4)
    assert (len(c4.edges), len(c4.vertices), len(c4.leaves)) == (5, 1, 4)


def test_example_tree_edges(example_tree):
    classes = classify_edges(example_tree)
    assert classes.root == ()
    assert classes.inner == {E, F, G, H}
    assert example_tree.stumps() == (H,)
    assert len(classes.leaves) == 6


def test_root_is_minimal(example_tree):
    assert all(edge_leq(example_tree, example_tree.root, e) for e in example_tree.edges)


def test_distinct_leaves_incomparable():
    for t in enumerate_trees(4, 3):
        for a, b in itertools.permutations(t.leaves, 2):
            assert not edge_leq(t, a, b)


@pytest.mark.parametrize("k", range(1, 6))
def test_linear_tree_inner_edges(k):
    assert len(linear_tree(k).inner_edges) == k - 1


def test_graft_counts():
    c2 = corolla(2)
    t = graft(c2, c2.leaves[0], corolla(3))
    # three edges plus four, sharing the grafted one
    assert (len(t.vertices), len(t.edges)) == (2, 6)
    assert is_isomorphic(t, parse_term("v[v[eta,eta,eta],eta]"))


def test_small_enumeration():
    assert [to_term(t) for t in enumerate_trees(1, 2)] == ["eta", "v[]", "v[eta]", "v[eta,eta]"]


@pytest.mark.parametrize("v,a", [(2, 2), (3, 2), (3, 3)])
def test_enumeration_matches_direct_recursion(v, a):
    trees = enumerate_trees(v, a)
    codes = [canonical_code(t) for t in trees]
    assert len(set(codes)) == len(codes)
    assert set(codes) == all_terms(v, a)


@pytest.mark.parametrize("n", range(5))
def test_corolla_automorphisms(n):
    assert automorphism_count(corolla(n)) == math.factorial(n) == brute_automorphisms(corolla(n))


def test_automorphisms_against_brute_force():
    for t in enumerate_trees(3, 3):
        assert automorphism_count(t) == brute_automorphisms(t)


@given(terms())
def test_term_round_trip(text):
    t = parse_term(text)
    assert parse_term(to_term(t)) == t or is_isomorphic(parse_term(to_term(t)), t)
    assert canonical_code(parse_term(to_term(t))) == canonical_code(t)


@given(terms())
def test_relabel_keeps_shape(text):
    t = parse_term(text)
    moved = relabel(t, {e: ("x",) + e for e in t.edges})
    assert is_isomorphic(moved, t)
    assert len(moved.vertices) == len(t.vertices)


def test_parse_errors_report_column():
    with pytest.raises(TermError) as err:
        parse_term("v[eta,,eta]")
    assert err.value.column == 7
    with pytest.raises(TermError):
        parse_term("v[eta")
    with pytest.raises(TreeError):
        parse_edge(parse_term("v[eta]"), "3")


def test_bad_trees_rejected():
    with pytest.raises(TreeError):
        Tree(0, {0: [1], 2: [1]})
    with pytest.raises(TreeError):
        Tree(0, {1: [2]})
