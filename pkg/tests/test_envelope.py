import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dendroidal.envelope import (Bounds, DecChain, DecObject, EnvError, cocartesian_lift, cocartesian_report,
                                 collapses_onto, compose_dec, dec_arrow, dec_arrows, dec_degeneracy, dec_face,
                                 dec_identity, dec_objects, degenerate_base, env_degeneracy, env_face,
                                 env_simplices, envelope_compose, envelope_hom, envelope_identity,
                                 envelope_nerve, envelope_tensor, fiber_compare, horns, inner_fillers,
                                 is_cocartesian, object_simplex, part, projection, segal_compare,
                                 validate_dec_arrow)
from dendroidal.forests import (BASE, PointedMap, all_pointed_maps, identity_map, simplicial_degeneracy,
                                simplicial_face)
from dendroidal.operads import Assoc, Com, OmegaOperad, free_binary
from dendroidal.trees import parse_term, to_term


def decorated_example() -> DecChain:
    """Three decorated arrows over the layered example: parts (3, 3, 2, 1)
    with the middle map dropping the first part."""
    objects = (DecObject((3, 2, 0)), DecObject((1, 1, 2)), DecObject((2, 1)), DecObject((1,)))
    betas = (PointedMap(3, 3, (2, 1, 3)), PointedMap(3, 2, (BASE, 1, 1)), PointedMap(2, 1, (BASE, 1)))
    alphas = (PointedMap(5, 4, (2, 2, 2, 1, 1)), PointedMap(4, 3, (BASE, 1, 2, 2)),
              PointedMap(3, 1, (BASE, BASE, 1)))
    return DecChain(objects, betas, alphas)


def test_decorated_example():
    c = decorated_example()
    assert all(validate_dec_arrow(a) for a in c.arrows())
    assert str(part(c)) == "3>3>2>1: 1->2,2->1,3->3 | 1->*,2->1,3->1 | 1->*,2->1"
    # components are ordered by their smallest edge, so the three leaves of
    # the first part come first
    assert [to_term(t) for t in c.forest.components] == ["v[v[eta,eta,eta]]", "v[eta,eta]", "v[v[],v[]]",
                                                        "v[v[]]"]


def test_mismatched_partition_is_invalid():
    a = decorated_example().arrows()[0]
    bad = type(a)(a.source, a.target, PointedMap(3, 3, (1, 2, 3)), a.forest)
    assert not validate_dec_arrow(bad)
    with pytest.raises(EnvError):
        DecChain((a.source, a.target), (bad.beta,), (a.alpha,))


@pytest.mark.parametrize("sizes", [(), (0,), (2,), (1, 2), (2, 0, 1)])
def test_identity_arrow(sizes):
    obj = DecObject(sizes)
    ident = dec_identity(obj)
    assert validate_dec_arrow(ident)
    assert all(to_term(t) == "v[eta]" for t in ident.forest.corollas)


def small_arrows(max_total: int, parts: int):
    objs = dec_objects(Bounds(max_total, parts))
    by_pair = {}
    for s, t in itertools.product(objs, repeat=2):
        arrows = [dec_arrow(s, t, b, a) for b, a in dec_arrows(s, t)]
        if arrows:
            by_pair[(s, t)] = arrows
    return objs, by_pair


@pytest.mark.parametrize("max_total,parts", [(1, 2), (2, 1)])
def test_decorated_composition(max_total, parts):
    objs, by_pair = small_arrows(max_total, parts)
    for (a, b), fs in by_pair.items():
        for f in fs:
            assert compose_dec(f, dec_identity(a)).alpha == f.alpha == compose_dec(dec_identity(b), f).alpha
        for c in objs:
            for g in by_pair.get((b, c), []):
                for f in fs:
                    gf = compose_dec(g, f)
                    assert validate_dec_arrow(gf)
                    assert gf.beta == f.beta.then(g.beta)
                    for d in objs:
                        for h in by_pair.get((c, d), []):
                            assert compose_dec(h, gf).alpha == compose_dec(compose_dec(h, g), f).alpha


def compatible_by_hand(s, t, beta, alpha):
    for j in range(1, s.n + 1):
        for e in s.edges_of(j):
            image = alpha(e)
            if beta(j) == BASE:
                if image != BASE:
                    return False
            elif image not in t.edges_of(beta(j)):
                return False
    return True


def test_arrow_enumeration_against_brute_force():
    objs = dec_objects(Bounds(2, 2))
    for s, t in itertools.product(objs, repeat=2):
        want = {(b, a) for b in all_pointed_maps(s.n, t.n) for a in all_pointed_maps(s.total, t.total)
                if compatible_by_hand(s, t, b, a)}
        assert set(dec_arrows(s, t)) == want


@pytest.mark.parametrize("L", range(4))
def test_objects_over_one_part(L):
    found = env_simplices(Com(), 0, Bounds(L, 1), degenerate_base(1, 0))
    assert len(found) == L + 1
    assert () in {s.levels()[0] for s in found}


def test_com_edges_against_brute_force():
    # Com has exactly one value on every tree, so edges are decorated arrows
    b = Bounds(2, 2)
    objs = dec_objects(b)
    want = sum(1 for s, t in itertools.product(objs, repeat=2)
               for beta in all_pointed_maps(s.n, t.n) for alpha in all_pointed_maps(s.total, t.total)
               if compatible_by_hand(s, t, beta, alpha))
    assert len(env_simplices(Com(), 1, b)) == want


def test_part_commutes_with_structure_maps():
    for c in DecChainSample:
        for i in range(c.k + 1):
            assert part(dec_face(i, c)) == simplicial_face(i, part(c))
            assert part(dec_degeneracy(i, c)) == simplicial_degeneracy(i, part(c))
            assert dec_face(i, c).edge_chain() == simplicial_face(i, c.edge_chain())


DecChainSample = [decorated_example()] + [s.chain for s in env_simplices(Com(), 2, Bounds(2, 2, 4))]


@pytest.mark.parametrize("P", [Com(), Assoc(), free_binary()], ids=repr)
def test_envelope_simplicial_identities(P):
    for s in env_simplices(P, 2, Bounds(2, 1, 4)):
        for i, j in itertools.combinations(range(3), 2):
            assert env_face(i, env_face(j, s)) == env_face(j - 1, env_face(i, s))
        for i in range(3):
            d = env_degeneracy(i, s)
            assert env_face(i, d) == s == env_face(i + 1, d)
            assert projection(d) == simplicial_degeneracy(i, projection(s))


def test_com_inner_horns_fill_uniquely():
    P = Com()
    for faces in horns(P, 2, 1, Bounds(2, 2, 4)):
        assert len(inner_fillers(P, faces, 1)) == 1


def test_horn_with_wrong_faces_is_rejected():
    P = Com()
    s = env_simplices(P, 2, Bounds(1, 1))[0]
    with pytest.raises(EnvError):
        inner_fillers(P, {0: env_face(0, s)}, 1)


def test_identity_lift_is_degenerate():
    P = free_binary()
    obj = DecObject((1, 1))
    for colours in itertools.product(P.colours, repeat=2):
        lift = cocartesian_lift(P, obj, colours, identity_map(2))
        assert lift == env_degeneracy(0, object_simplex(P, obj, colours))
        assert is_cocartesian(lift, 2, Bounds(2, 2, 4))


@pytest.mark.parametrize("n", range(1, 4))
def test_projection_lift(n):
    P = Com()
    obj = DecObject((1,) * n)
    for j in range(1, n + 1):
        rho = PointedMap(n, 1, tuple(1 if i == j else BASE for i in range(1, n + 1)))
        lift = cocartesian_lift(P, obj, ("c",) * n, rho)
        terms = sorted(to_term(t) for t in lift.forest.components)
        assert terms == ["eta"] * (n - 1) + ["v[eta]"]
        assert projection(lift).maps == (rho,)


def test_non_invertible_edge_is_not_cocartesian():
    P = OmegaOperad(parse_term("v[eta]"))
    (edge,) = [e for e in env_simplices(P, 1, Bounds(1, 1)) if e.levels() == (((0,),), ((),))]
    report = cocartesian_report(edge, 2, Bounds(1, 1))
    assert not report.ok
    assert report.witness["fillers"] == 0


def test_degenerate_chain_collapses():
    for s in env_simplices(Com(), 2, Bounds(2, 1, 4)):
        assert collapses_onto(env_degeneracy(0, s))[1]


def test_tensor_unit_and_small_homs():
    P = free_binary()
    assert envelope_tensor(("a",), ()) == ("a",) == envelope_tensor((), ("a",))
    assert len(envelope_hom(Com(), ("c",), ("c",))) == 1
    for a, b, d in itertools.product(P.colours, repeat=3):
        assert len(envelope_hom(P, (a, b), (d,))) == len(P.operations((a, b), d))


@settings(max_examples=30)
@given(st.data())
def test_envelope_category_laws(data):
    P = Assoc()
    x = data.draw(st.sampled_from(ENV_TRIPLES))
    f, g, h = x.morphisms
    assert envelope_compose(P, h, envelope_compose(P, g, f)) == envelope_compose(P, envelope_compose(P, h, g), f)
    assert envelope_compose(P, f, envelope_identity(P, f.source)) == f
    assert envelope_compose(P, envelope_identity(P, f.target), f) == f
    assert envelope_tensor(envelope_identity(P, f.source), envelope_identity(P, ())) == envelope_identity(P, f.source)


ENV_TRIPLES = envelope_nerve(Assoc(), 3, 2)


@pytest.mark.parametrize("n,k", [(1, 0), (1, 2), (2, 0), (2, 1), (2, 2)])
def test_segal_small(n, k):
    assert segal_compare(Com(), n, k, 2).ok


@pytest.mark.parametrize("k", range(3))
def test_fibre_small(k):
    for P in (Com(), Assoc(), free_binary()):
        result = fiber_compare(P, k, 2)
        assert result.ok and result.left == result.right
