import itertools

import pytest
from hypothesis import given, strategies as st

from dendroidal.omega import (MorphismError, brute_force_hom_set, compose, corolla_edge_face, degeneracy,
                              elementary_faces, hom_set, identity, inner_face, is_iso, leaf_face,
                              operation_exists, root_face, validate_morphism)
from dendroidal.trees import automorphism_count, canonical_code, corolla, enumerate_trees, parse_term

from conftest import E, F, G, H

SMALL = enumerate_trees(2, 2)
MEDIUM = enumerate_trees(3, 3)


def test_operations_of_example(example_tree):
    assert operation_exists(example_tree, (), {F, G}) is not None
    # e sits above g, so g's other inputs would be left uncovered
    assert operation_exists(example_tree, (), {F, E}) is None


def test_generators_validate():
    for T in enumerate_trees(4, 3):
        for d in elementary_faces(T):
            assert validate_morphism(d.morphism)
        for e in T.edges:
            assert validate_morphism(degeneracy(T, e))


def test_inner_face_image():
    for T in enumerate_trees(4, 3):
        for e in T.inner_edges:
            assert set(inner_face(T, e).domain.edges) == set(T.edges) - {e}


def test_inner_faces_commute():
    for T in enumerate_trees(4, 3):
        for e, f in itertools.permutations(T.inner_edges, 2):
            one = inner_face(inner_face(T, e).domain, f).domain
            two = inner_face(inner_face(T, f).domain, e).domain
            assert set(one.edges) == set(two.edges)


def test_example_faces(example_tree):
    T = example_tree
    merged = inner_face(T, E).domain
    assert len(merged.vertices) == 4
    assert len(merged.inputs(G)) == 5
    assert F in leaf_face(T, F).domain.leaves
    assert H in leaf_face(T, H).domain.leaves
    with pytest.raises(MorphismError):
        root_face(T)


def test_root_face_of_grafted_corollas():
    T = parse_term("v[eta,v[eta,eta]]")
    assert root_face(T).domain == T.subtree((1,))


def test_corolla_faces():
    faces = elementary_faces(corolla(2))
    assert len(faces) == 3
    assert all(len(d.domain.edges) == 1 for d in faces)
    assert corolla_edge_face(corolla(2), ()).domain.root == ()


def test_degeneracy_counts():
    for T in MEDIUM:
        for e in T.edges:
            s = degeneracy(T, e)
            assert len(s.domain.vertices) == len(T.vertices) + 1
            assert len(s.domain.edges) == len(T.edges) + 1


def test_degeneracy_sections():
    for T in MEDIUM:
        for e in T.edges:
            s = degeneracy(T, e)
            sections = [d for d in elementary_faces(s.domain)
                        if len(d.domain.vertices) == len(T.vertices) and is_iso(compose(s, d.morphism))]
            # contract either half of the subdivided edge, or for a root or
            # leaf edge drop the new outer vertex instead of contracting
            assert len(sections) == 2


def test_automorphisms_in_hom_sets():
    for T in MEDIUM:
        assert sum(is_iso(m) for m in hom_set(T, T)) == automorphism_count(T)


def test_hom_against_brute_force():
    assert len(hom_set(corolla(2), corolla(2))) == len(brute_force_hom_set(corolla(2), corolla(2)))
    for T, S in itertools.product(SMALL, repeat=2):
        assert [m.images for m in hom_set(T, S)] == sorted(m.images for m in brute_force_hom_set(T, S))


def test_is_iso_by_shape():
    for T, S in itertools.product(SMALL, repeat=2):
        for m in hom_set(T, S):
            bijective = len(set(m.images)) == len(S.edges) == len(T.edges)
            assert is_iso(m) == (bijective and canonical_code(T) == canonical_code(S))


@given(st.data())
def test_composition_is_associative(data):
    A, B, C, D = (data.draw(st.sampled_from(SMALL)) for _ in range(4))
    fs, gs, hs = hom_set(A, B), hom_set(B, C), hom_set(C, D)
    if not (fs and gs and hs):
        return
    f, g, h = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs)), data.draw(st.sampled_from(hs))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(f, identity(A)) == f == compose(identity(B), f)
