import itertools
import math

import pytest
from hypothesis import given, strategies as st

from dendroidal import omega
from dendroidal.operads import Assoc, Com, OmegaOperad, free_binary, nerve_dendrices
from dendroidal.subcomplexes import (Subcomplex, all_face_monos, boundary, brute_force_extend, brute_force_maps,
                                     extend, face_closure, face_keys, inner_horn, intersect, is_downward_closed,
                                     is_subcomplex, leaf_horn, maps_to_nerve, normality_violations, root_horn,
                                     spine, union)
from dendroidal.trees import corolla, enumerate_trees, linear_tree, parse_term

SMALL = enumerate_trees(3, 3)
OPERADS = [Com(), Assoc(), free_binary(), OmegaOperad(parse_term("v[v[eta],eta]"))]


def test_corolla_face_monos():
    monos = all_face_monos(corolla(2))
    assert len(monos) == 4
    assert sum(len(m.domain.edges) == 1 for m in monos) == 3


def test_example_face_count_is_order_free(example_tree):
    bfs = {m.key for m in all_face_monos(example_tree, "bfs")}
    dfs = {m.key for m in all_face_monos(example_tree, "dfs")}
    assert bfs == dfs == face_keys(example_tree)
    assert len(bfs) == 80


def test_closure_matches_generated_faces():
    for T in enumerate_trees(4, 3):
        bfs = {m.key: m.domain for m in all_face_monos(T)}
        assert bfs == face_closure(T)


def test_example_spine(example_tree):
    S = spine(example_tree)
    trees = [S.tree(k) for k in S.maximal]
    # one corolla per vertex, the stump included
    assert len(trees) == len(example_tree.vertices) == 5
    assert all(len(t.vertices) == 1 for t in trees)


def test_boundary_is_union_of_faces():
    for T in enumerate_trees(4, 3):
        if T.is_eta:
            continue
        gens = [d.domain for d in omega.elementary_faces(T)]
        assert Subcomplex.generated(T, gens) == boundary(T)
        assert not boundary(T).is_full()


def test_horns_miss_one_face():
    for T in SMALL:
        B = boundary(T) if not T.is_eta else None
        for e in T.inner_edges:
            H = inner_horn(T, e)
            missing = omega.face_key(omega.inner_face(T, e).domain)
            assert missing not in H and is_subcomplex(H, B)
            assert union(H, Subcomplex.generated(T, [omega.inner_face(T, e).domain])) == B


@given(st.sampled_from([T for T in SMALL if len(T.inner_edges) >= 2]), st.data())
def test_lattice_operations(T, data):
    e, f = data.draw(st.permutations(T.inner_edges))[:2]
    a, b = inner_horn(T, e), inner_horn(T, f)
    for c in (union(a, b), intersect(a, b)):
        assert is_downward_closed(c)
    assert is_subcomplex(intersect(a, b), a) and is_subcomplex(a, union(a, b))
    assert union(a, b) == boundary(T)


@pytest.mark.parametrize("P", [Assoc(), free_binary()], ids=repr)
def test_spine_maps_are_products(P):
    for T in SMALL:
        maps = maps_to_nerve(P, spine(T))
        assert len(maps) == len(nerve_dendrices(P, T))
        if isinstance(P, Assoc):
            assert len(maps) == math.prod(math.factorial(len(T.inputs(v))) for v in T.vertices)


def test_linear_spine_against_as():
    assert len(maps_to_nerve(Assoc(), spine(linear_tree(2)))) == 1
    T = parse_term("v[v[eta,eta],eta]")
    assert len(maps_to_nerve(Assoc(), spine(T))) == 2 * 2


def test_spine_and_inner_horns_extend_uniquely():
    for P in OPERADS:
        for T in SMALL:
            full = Subcomplex.full(T)
            subs = [spine(T)] + [inner_horn(T, e) for e in T.inner_edges]
            for A in subs:
                for f in maps_to_nerve(P, A):
                    assert len(extend(P, A, full, f)) == 1


def test_outer_horns_can_fail():
    found = []
    P = Assoc()
    for T in SMALL:
        full = Subcomplex.full(T)
        outer = [leaf_horn(T, v) for v in T.leaf_vertices()] if len(T.vertices) > 1 else []
        if len(T.vertices) > 1 and omega.has_root_face(T):
            outer.append(root_horn(T))
        for A in outer:
            for f in maps_to_nerve(P, A):
                n = len(extend(P, A, full, f))
                if n != 1:
                    found.append((T, A, n))
    assert found


def test_maps_match_brute_force():
    for P in OPERADS[:3]:
        for T in enumerate_trees(2, 2):
            subs = [Subcomplex.empty(T), Subcomplex.full(T), spine(T)]
            if not T.is_eta:
                subs.append(boundary(T))
            for A in subs:
                got = sorted(repr(m.values) for m in maps_to_nerve(P, A))
                want = sorted(repr(m.values) for m in brute_force_maps(P, A))
                assert got == want


def test_extend_from_empty_lists_the_nerve():
    for P in OPERADS[:3]:
        for T in enumerate_trees(2, 2):
            (f,) = maps_to_nerve(P, Subcomplex.empty(T))
            ext = extend(P, Subcomplex.empty(T), Subcomplex.full(T), f)
            assert len(ext) == len(nerve_dendrices(P, T))
            assert len(brute_force_extend(P, Subcomplex.empty(T), Subcomplex.full(T), f)) == len(ext)


def test_boundaries_are_normal():
    for T, S in itertools.product(enumerate_trees(2, 2), repeat=2):
        if not T.is_eta:
            assert normality_violations(boundary(T), S) == []
