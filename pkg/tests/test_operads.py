import itertools
import json

import pytest

from dendroidal.omega import FreeOperation, all_operations, elementary_faces, hom_set, inner_face, operation_exists
from dendroidal.operads import (Assoc, Com, OmegaOperad, OperadError, TableOperad, evaluate, free_binary,
                                linear_face, load_operad, nerve_dendrices, omega_as_operad, operad_from_dict,
                                operad_to_dict, relabel_dendrex, restrict,
                                underlying_category_nerve, validate_dendrex, validate_operad)
from dendroidal.trees import corolla, enumerate_trees, linear_tree, parse_term, path_labels


def cyclic_monoid(corrupt: bool = False) -> TableOperad:
    """Z/3 as a one-coloured operad of unary operations."""
    names = ["one", "a", "b"]
    table = {(x, y): names[(i + j) % 3] for i, x in enumerate(names) for j, y in enumerate(names)}
    if corrupt:
        table[("b", "b")] = "b"
    ops = {n: (("c",), "c") for n in names}
    comp = {(x, (y,)): r for (x, y), r in table.items()}
    return TableOperad(("c",), ops, {"c": "one"}, comp, {}, "Z3")


@pytest.mark.parametrize("P", [Com(), Assoc(), free_binary(), cyclic_monoid()], ids=repr)
def test_builtin_operads_are_valid(P):
    assert validate_operad(P, 3) == []


def test_corrupted_entry_is_reported():
    report = validate_operad(cyclic_monoid(corrupt=True), 3)
    assert report
    assert all(line.startswith("associativity") and "'b'" in line for line in report)


def test_tree_operads_are_valid():
    for T in enumerate_trees(4, 3):
        assert validate_operad(omega_as_operad(T), 3) == [], T


def test_corolla_operad():
    P = omega_as_operad(corolla(2))
    assert len(P.colours) == 3
    ops = P.all_operations(3)
    identities = [p for p in ops if P.arity(p) == 1]
    binary = [p for p in ops if P.arity(p) == 2]
    assert len(identities) == 3
    # one binary operation, seen in both input orders
    assert {P.act(binary[0], (1, 0)), binary[0]} == set(binary)


def test_example_operations_brute_force(example_tree):
    T = example_tree
    found = set()
    for out in T.edges:
        for n in range(len(T.edges) + 1):
            for ins in itertools.combinations(T.edges, n):
                op = operation_exists(T, out, ins)
                if op is not None:
                    found.add(op)
    assert found == set(all_operations(T))


def test_representables_small():
    for S, T in itertools.product(enumerate_trees(2, 2), repeat=2):
        assert len(nerve_dendrices(OmegaOperad(S), T)) == len(hom_set(T, S))


def test_nerve_elements_validate():
    P = Assoc()
    for T in enumerate_trees(3, 3):
        for x in nerve_dendrices(P, T):
            assert validate_dendrex(P, x)


def test_full_operation_is_one_composition():
    P = Assoc()
    T = parse_term("v[v[eta,eta],eta]")
    full = FreeOperation((), frozenset(T.leaves))
    for x in nerve_dendrices(P, T):
        assert evaluate(P, x, full) == P.compose(x.op(()), [x.op((0,)), P.identity("c")])


@pytest.mark.parametrize("P", [Assoc(), free_binary()], ids=repr)
def test_evaluation_is_associative(P):
    # contracting an inner edge first does not change the total operation
    for T in enumerate_trees(3, 3):
        if len(T.vertices) != 3:
            continue
        full = FreeOperation(T.root, frozenset(T.input_edges))
        for x in nerve_dendrices(P, T):
            for e in T.inner_edges:
                y = restrict(P, x, inner_face(T, e))
                assert evaluate(P, y, full) == evaluate(P, x, full)


def test_restriction_is_functorial():
    P = Assoc()
    for T in enumerate_trees(3, 3):
        if len(T.vertices) != 3:
            continue
        xs = nerve_dendrices(P, T)
        for g in elementary_faces(T):
            for f in elementary_faces(g.domain):
                for x in xs:
                    assert restrict(P, restrict(P, x, g), f) == restrict(P, x, f.then(g))


def _linear_d(P, i, x, k):
    y = restrict(P, x, linear_face(k, i))
    return relabel_dendrex(P, y, path_labels(y.tree))


@pytest.mark.parametrize("k", [2, 3])
def test_underlying_category_faces(k):
    P = free_binary()
    for x in underlying_category_nerve(Assoc(), k) + underlying_category_nerve(P, k):
        Q = Assoc() if x.colours[0] == "c" else P
        for i, j in itertools.combinations(range(k + 1), 2):
            lhs = _linear_d(Q, i, _linear_d(Q, j, x, k), k - 1)
            rhs = _linear_d(Q, j - 1, _linear_d(Q, i, x, k), k - 1)
            assert lhs == rhs
        assert linear_tree(k).edges == x.tree.edges


def test_json_round_trip(tmp_path):
    P = free_binary()
    doc = operad_to_dict(P)
    path = tmp_path / "free.json"
    path.write_text(json.dumps(doc))
    Q = load_operad(str(path))
    assert operad_to_dict(Q) == doc
    assert validate_operad(Q, 3) == []


def test_missing_composition_is_an_error():
    doc = operad_to_dict(free_binary())
    doc["composition"] = doc["composition"][1:]
    with pytest.raises(OperadError, match="missing composition"):
        operad_from_dict(doc)


def test_bad_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"colours": ["a"],\n "operations": [}')
    with pytest.raises(OperadError, match="line 2 column"):
        load_operad(str(path))


def test_named_operads():
    assert isinstance(load_operad("com"), Com)
    assert load_operad("omega:v[eta,eta]") == OmegaOperad(corolla(2))
    with pytest.raises(OperadError):
        operad_from_dict({"builtin": "nope"})
