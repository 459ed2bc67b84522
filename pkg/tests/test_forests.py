import itertools

import pytest
from hypothesis import given, strategies as st

from dendroidal.forests import (Chain, ForestError, PointedMap, all_chains, all_pointed_maps, arrow_from_map,
                                chain_to_forest, compose_arrows, distinct_components, face_inclusion,
                                forest_extend, forest_to_chain, horn_subcomplex, identity_map, is_uprooted,
                                map_from_arrow, parse_chain, render_ascii, render_dot, rl_subcomplex,
                                simplicial_degeneracy, simplicial_face)
from dendroidal.operads import Assoc
from dendroidal.subcomplexes import maps_to_nerve, spine
from dendroidal.trees import is_isomorphic, linear_tree, to_term

from strategies import pointed_maps

# three layers of pictures: two corollas and two stumps, then one element
# lost, then everything but one element lost
LAYERED = "5>4>3>1: 1->1,2->1,3->2,4->2,5->2 | 1->*,2->1,3->2,4->2 | 1->*,2->*,3->1"


def terms_of(F):
    return [to_term(t) for t in F.components]


@pytest.mark.parametrize("n", range(5))
def test_identity_arrow_is_unary_corollas(n):
    A = arrow_from_map(identity_map(n))
    assert len(A.corollas) == n and not A.uprooted
    assert all(to_term(c) == "v[eta]" for c in A.corollas)


@pytest.mark.parametrize("n", range(1, 5))
def test_projection_arrow(n):
    # keep element j, send the rest to the basepoint
    for j in range(1, n + 1):
        rho = PointedMap(n, 1, tuple(1 if i == j else 0 for i in range(1, n + 1)))
        A = arrow_from_map(rho)
        assert [to_term(c) for c in A.corollas] == ["v[eta]"]
        assert len(A.uprooted) == n - 1


def test_pointed_sets_round_trip():
    for m, n in itertools.product(range(4), repeat=2):
        for a in all_pointed_maps(m, n):
            assert map_from_arrow(arrow_from_map(a)) == a


@given(st.data())
def test_arrow_composition_is_functorial(data):
    a = data.draw(pointed_maps(4))
    b = data.draw(pointed_maps(4, m=a.n))
    assert map_from_arrow(compose_arrows(arrow_from_map(b), arrow_from_map(a))) == a.then(b)


def test_layered_example():
    F = chain_to_forest(parse_chain(LAYERED))
    assert terms_of(F) == ["v[eta,eta]", "v[v[eta,eta,eta]]", "v[v[],v[]]", "v[v[]]"]
    assert [is_uprooted(F, c) for c in range(4)] == [True, True, True, False]


def test_layered_example_faces():
    F = chain_to_forest(parse_chain(LAYERED))
    top, maps = face_inclusion(3, F)
    # the last two uprooted trees survive to the new top, the last tree
    # loses its root
    assert terms_of(top) == ["v[eta,eta]", "v[v[eta,eta,eta]]", "v[v[],v[]]", "v[]"]
    assert top.death_level == (2, 0, 0, 0)
    bottom, _ = face_inclusion(0, F)
    assert terms_of(bottom) == ["eta", "v[eta]", "v[eta,eta]", "v[v[]]"]
    assert all(m.source == m.target for m in maps)


def test_constant_chain_is_subdivided():
    for n in range(1, 4):
        c = Chain.of(*[identity_map(n)] * 3)
        F = chain_to_forest(c)
        assert len(F.components) == n
        assert all(is_isomorphic(t, linear_tree(3)) for t in F.components)


def test_chain_round_trip():
    for k in range(4):
        for c in all_chains(k, 3 if k < 3 else 2):
            assert forest_to_chain(chain_to_forest(c)) == c
            assert parse_chain(str(c)) == c


def test_inner_faces_keep_uprooted_trees():
    for c in all_chains(3, 2):
        F = chain_to_forest(c)
        for i in (1, 2):
            G, maps = face_inclusion(i, F)
            for m in maps:
                assert is_uprooted(G, m.source) == is_uprooted(F, m.target)


def test_simplicial_identities_on_chains():
    for c in all_chains(3, 2):
        for i, j in itertools.combinations(range(4), 2):
            assert simplicial_face(i, simplicial_face(j, c)) == simplicial_face(j - 1, simplicial_face(i, c))
        for i in range(4):
            s = simplicial_degeneracy(i, c)
            assert simplicial_face(i, s) == c == simplicial_face(i + 1, s)


def test_rl_union_of_a_single_tree_is_its_spine():
    for c in all_chains(2, 3):
        F = chain_to_forest(c)
        for t, d, sub in zip(F.components, F.death_level, rl_subcomplex(F)):
            if not d and len(t.vertices) == 2:
                assert sub == spine(t)


def test_uprooted_tree_is_its_own_first_face():
    # the whole tree already lies in the first face
    c = parse_chain("2>1>0: 1->1,2->1 | 1->*")
    F = chain_to_forest(c)
    assert F.death_level == (2,)
    assert rl_subcomplex(F)[0].is_full()


def test_horns_extend_uniquely_on_small_forests():
    P = Assoc()
    for F in distinct_components(3, 4):
        for j in (1, 2):
            A = horn_subcomplex(j, F)
            for f in maps_to_nerve(P, A[0]):
                assert len(forest_extend(P, F, A, [f])) == 1


def test_rendering_marks_uprooted_roots():
    F = chain_to_forest(parse_chain(LAYERED))
    text = render_ascii(F)
    assert text.count("×") == 6  # three headers and three markers
    assert render_ascii(F) == text
    dot = render_dot(F)
    assert dot.startswith("digraph") and dot.count('label="×"') == 3


@pytest.mark.parametrize("text,message", [
    ("5>4 1->1", "bad sizes"),
    ("2>1: 1->1", "no value"),
    ("2>1: 1->1,2->3", "out of range"),
    ("2>1: 1->1,1->1", "twice"),
    ("2>1>1: 1->1,2->1", "need 2 maps"),
    ("1>1: 1=>1", "cannot read"),
])
def test_chain_parse_errors(text, message):
    with pytest.raises(ForestError, match=message):
        parse_chain(text)


def test_face_index_range():
    c = parse_chain("1>1: 1->1")
    with pytest.raises(ForestError):
        simplicial_face(2, c)
    with pytest.raises(ForestError):
        horn_subcomplex(5, chain_to_forest(c))


def test_empty_chain_needs_a_size():
    with pytest.raises(ForestError):
        Chain.of()
    assert to_term(chain_to_forest(Chain.of(size=1)).components[0]) == "eta"
