"""Coloured operads, their dendroidal nerves and presheaf restriction.

Operations are opaque hashable values.  An operation has an ordered input
profile; the symmetric action ``act(p, perm)`` returns the operation whose
``i``-th input is the ``perm[i]``-th input of ``p``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from . import omega
from .omega import FreeOperation, OmegaMorphism, operation_exists, operations_by_output
from .trees import Tree, linear_tree, parse_term, relabel


class OperadError(ValueError):
    pass


def invert(perm: Sequence[int]) -> tuple:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def argsort(seq: Sequence) -> tuple:
    return tuple(sorted(range(len(seq)), key=lambda i: seq[i]))


class Operad:
    """Interface shared by table-driven and rule-driven operads."""

    name = "operad"
    colours: tuple = ()

    def profile(self, p) -> tuple:
        """``(inputs, output)`` of an operation."""
        raise NotImplementedError

    def identity(self, c):
        raise NotImplementedError

    def operations(self, inputs: tuple, output) -> list:
        """All operations with exactly this profile, in canonical order."""
        raise NotImplementedError

    def compose(self, p, qs: Sequence):
        raise NotImplementedError

    def act(self, p, perm: Sequence[int]):
        raise NotImplementedError

    # derived -----------------------------------------------------------------
    def arity(self, p) -> int:
        return len(self.profile(p)[0])

    def output(self, p):
        return self.profile(p)[1]

    def ops_with_output(self, output, arity: int) -> list:
        found = []
        for ins in itertools.product(self.colours, repeat=arity):
            found.extend(self.operations(ins, output))
        return found

    def all_operations(self, max_arity: int) -> list:
        return [p for n in range(max_arity + 1) for c in self.colours
                for p in self.ops_with_output(c, n)]

    def __repr__(self) -> str:
        return f"<{self.name}>"


class Com(Operad):
    """The terminal one-coloured operad: one operation in each arity."""

    name = "Com"
    colours = ("c",)

    def profile(self, p):
        return ("c",) * p, "c"

    def identity(self, c):
        return 1

    def operations(self, inputs, output):
        return [len(inputs)]

    def compose(self, p, qs):
        return sum(qs)

    def act(self, p, perm):
        return p


class Assoc(Operad):
    """The associative operad.  An arity-``n`` operation is a word: a
    permutation of ``range(n)`` giving the order in which inputs are
    multiplied."""

    name = "As"
    colours = ("c",)

    def profile(self, p):
        return ("c",) * len(p), "c"

    def identity(self, c):
        return (0,)

    def operations(self, inputs, output):
        return [tuple(w) for w in itertools.permutations(range(len(inputs)))]

    def compose(self, p, qs):
        offsets = list(itertools.accumulate([0] + [len(q) for q in qs]))
        word = []
        for i in p:
            word.extend(offsets[i] + x for x in qs[i])
        return tuple(word)

    def act(self, p, perm):
        inv = invert(perm)
        return tuple(inv[b] for b in p)


class OmegaOperad(Operad):
    """The free operad generated by a tree: colours are its edges."""

    def __init__(self, tree: Tree):
        self.tree = tree
        self.colours = tree.edges
        self.name = f"Omega({tree!r})"

    def profile(self, p):
        return p[1], p[0]

    def identity(self, c):
        return (c, (c,))

    def operations(self, inputs, output):
        if len(set(inputs)) != len(inputs):
            return []
        if operation_exists(self.tree, output, inputs) is None:
            return []
        return [(output, tuple(inputs))]

    def ops_with_output(self, output, arity):
        found = []
        for op in operations_by_output(self.tree)[output]:
            if len(op.inputs) == arity:
                found.extend((output, perm) for perm in itertools.permutations(sorted(op.inputs)))
        return found

    def compose(self, p, qs):
        ins = []
        for q in qs:
            ins.extend(q[1])
        return (p[0], tuple(ins))

    def act(self, p, perm):
        return (p[0], tuple(p[1][i] for i in perm))

    def __eq__(self, other):
        return isinstance(other, OmegaOperad) and other.tree == self.tree

    def __hash__(self):
        return hash(("omega", self.tree))


class TableOperad(Operad):
    """A finite operad given by explicit composition and symmetry tables."""

    def __init__(self, colours, operations: dict, identities: dict,
                 composition: dict, symmetries: dict, name: str = "table"):
        self.name = name
        self.colours = tuple(colours)
        self.ops = {n: (tuple(i), o) for n, (i, o) in operations.items()}
        self.identities = dict(identities)
        self.composition = dict(composition)
        self.symmetries = dict(symmetries)
        self._by_profile: dict = {}
        for n, prof in sorted(self.ops.items()):
            self._by_profile.setdefault(prof, []).append(n)
        self._check_complete()

    def _check_complete(self):
        for n, (ins, out) in self.ops.items():
            if out not in self.colours or any(c not in self.colours for c in ins):
                raise OperadError(f"operation {n!r} uses an unknown colour")
        for c in self.colours:
            if c not in self.identities:
                raise OperadError(f"no identity for colour {c!r}")
        for p, (ins, _) in self.ops.items():
            choices = [self._by_output(c) for c in ins]
            for qs in itertools.product(*choices):
                if (p, qs) not in self.composition:
                    raise OperadError(f"missing composition entry {p!r} o {list(qs)!r}")
            for perm in itertools.permutations(range(len(ins))):
                if perm != tuple(range(len(ins))) and (p, perm) not in self.symmetries:
                    raise OperadError(f"missing symmetry entry {p!r} . {list(perm)!r}")

    def _by_output(self, c) -> list:
        return [n for n, (_, o) in sorted(self.ops.items()) if o == c]

    def profile(self, p):
        return self.ops[p]

    def identity(self, c):
        return self.identities[c]

    def operations(self, inputs, output):
        return list(self._by_profile.get((tuple(inputs), output), []))

    def ops_with_output(self, output, arity):
        return [n for n in self._by_output(output) if len(self.ops[n][0]) == arity]

    def all_operations(self, max_arity=None):
        return sorted(self.ops)

    def compose(self, p, qs):
        try:
            return self.composition[(p, tuple(qs))]
        except KeyError:
            raise OperadError(f"no composition entry {p!r} o {list(qs)!r}") from None

    def act(self, p, perm):
        perm = tuple(perm)
        if perm == tuple(range(len(perm))):
            return p
        return self.symmetries[(p, perm)]


def tabulate(P: Operad, max_arity: int, name: str | None = None) -> TableOperad:
    """Freeze a rule-based operad into tables.  Only valid when ``P`` has no
    operations above ``max_arity``."""
    ops = {}
    names = {}
    for p in P.all_operations(max_arity):
        names[p] = _op_name(p)
        ops[names[p]] = P.profile(p)
    by_out = {c: [p for p in names if P.output(p) == c] for c in P.colours}
    comp = {}
    for p in names:
        ins, _ = P.profile(p)
        for qs in itertools.product(*(by_out[c] for c in ins)):
            r = P.compose(p, qs)
            if r not in names:
                raise OperadError(f"{P!r} is not closed within arity {max_arity}")
            comp[(names[p], tuple(names[q] for q in qs))] = names[r]
    sym = {}
    for p in names:
        n = P.arity(p)
        for perm in itertools.permutations(range(n)):
            if perm != tuple(range(n)):
                sym[(names[p], perm)] = names[P.act(p, perm)]
    idents = {c: names[P.identity(c)] for c in P.colours}
    return TableOperad(P.colours, ops, idents, comp, sym, name or P.name)


def _op_name(p) -> str:
    return p if isinstance(p, str) else repr(p)


def free_binary() -> TableOperad:
    """Free symmetric operad on one generator ``mu: (a, a) -> b``."""
    ops = {"id_a": (("a",), "a"), "id_b": (("b",), "b"),
           "mu": (("a", "a"), "b"), "mu'": (("a", "a"), "b")}
    comp = {("id_a", ("id_a",)): "id_a", ("id_b", ("id_b",)): "id_b",
            ("id_b", ("mu",)): "mu", ("id_b", ("mu'",)): "mu'",
            ("mu", ("id_a", "id_a")): "mu", ("mu'", ("id_a", "id_a")): "mu'"}
    sym = {("mu", (1, 0)): "mu'", ("mu'", (1, 0)): "mu"}
    return TableOperad(("a", "b"), ops, {"a": "id_a", "b": "id_b"}, comp, sym, "Free(mu)")


def unary_two_colour() -> TableOperad:
    """Two colours and only identities: no operations of arity 2."""
    ops = {"id_a": (("a",), "a"), "id_b": (("b",), "b")}
    comp = {("id_a", ("id_a",)): "id_a", ("id_b", ("id_b",)): "id_b"}
    return TableOperad(("a", "b"), ops, {"a": "id_a", "b": "id_b"}, comp, {}, "Disc2")


BUILTIN = {
    "com": Com,
    "as": Assoc,
    "free-binary": free_binary,
    "discrete": unary_two_colour,
}


# file format ---------------------------------------------------------------


def operad_from_dict(doc: dict) -> Operad:
    if "builtin" in doc:
        try:
            return BUILTIN[doc["builtin"]]()
        except KeyError:
            raise OperadError(f"unknown builtin operad {doc['builtin']!r}") from None
    try:
        colours = doc["colours"]
        ops = {}
        idents = {}
        for entry in doc["operations"]:
            ops[entry["name"]] = (tuple(entry["inputs"]), entry["output"])
            if entry.get("identity"):
                idents[entry["output"]] = entry["name"]
        comp = {(e["outer"], tuple(e["slotArgs"])): e["result"] for e in doc.get("composition", [])}
        sym = {(e["op"], tuple(e["permutation"])): e["result"] for e in doc.get("symmetries", [])}
    except (KeyError, TypeError) as exc:
        raise OperadError(f"malformed operad document: {exc}") from None
    return TableOperad(colours, ops, idents, comp, sym, doc.get("name", "table"))


def operad_to_dict(P: TableOperad) -> dict:
    idents = set(P.identities.values())
    return {
        "name": P.name,
        "colours": list(P.colours),
        "operations": [dict(name=n, inputs=list(i), output=o, **({"identity": True} if n in idents else {}))
                       for n, (i, o) in sorted(P.ops.items())],
        "composition": [{"outer": p, "slotArgs": list(qs), "result": r}
                        for (p, qs), r in sorted(P.composition.items())],
        "symmetries": [{"op": p, "permutation": list(perm), "result": r}
                       for (p, perm), r in sorted(P.symmetries.items())],
    }


def load_operad(spec: str) -> Operad:
    """Load from a JSON file path, name a builtin (``com``, ``as``...), or
    write ``omega:<term>`` for the operad generated by a tree."""
    if spec in BUILTIN:
        return BUILTIN[spec]()
    if spec.startswith("omega:"):
        return OmegaOperad(parse_term(spec[len("omega:"):]))
    path = Path(spec)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise OperadError(f"{spec}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return operad_from_dict(doc)


# validation ---------------------------------------------------------------


def validate_operad(P: Operad, max_arity: int = 3) -> list[str]:
    """Every violated axiom instance, checked exhaustively up to ``max_arity``.

    Empty list means valid.
    """
    report: list[str] = []
    ops = P.all_operations(max_arity)
    by_out: dict = {}
    for p in ops:
        by_out.setdefault(P.output(p), []).append(p)

    def note(msg):
        if msg not in report:
            report.append(msg)

    def ok_profile(r, ins, out, what):
        if tuple(P.profile(r)[0]) != tuple(ins) or P.output(r) != out:
            note(f"profile: {what} gives {r!r} with wrong profile")
            return False
        return True

    for p in ops:
        ins, out = P.profile(p)
        ids = [P.identity(c) for c in ins]
        if P.compose(P.identity(out), [p]) != p:
            note(f"left unit: id_{out} o {p!r}")
        if P.compose(p, ids) != p:
            note(f"right unit: {p!r} o ids")
        n = len(ins)
        perms = list(itertools.permutations(range(n)))
        for s in perms:
            ps = P.act(p, s)
            ok_profile(ps, [ins[i] for i in s], out, f"{p!r}.{s}")
            for t in perms:
                st = tuple(s[t[i]] for i in range(n))
                if P.act(ps, t) != P.act(p, st):
                    note(f"action: ({p!r}.{s}).{t}")
        for qs in itertools.product(*(by_out.get(c, []) for c in ins)):
            arity = sum(P.arity(q) for q in qs)
            if arity > max_arity:
                continue
            r = P.compose(p, qs)
            flat = [c for q in qs for c in P.profile(q)[0]]
            if not ok_profile(r, flat, out, f"{p!r} o {list(qs)!r}"):
                continue
            _check_equivariance(P, p, qs, r, perms, note)
            for rs in itertools.product(*(by_out.get(c, []) for c in flat)):
                if sum(P.arity(x) for x in rs) > max_arity:
                    continue
                lhs = P.compose(r, rs)
                inner, k = [], 0
                for q in qs:
                    a = P.arity(q)
                    inner.append(P.compose(q, rs[k:k + a]))
                    k += a
                rhs = P.compose(p, inner)
                if lhs != rhs:
                    note(f"associativity: {p!r} o {list(qs)!r} o {list(rs)!r}")
    return report


def _check_equivariance(P, p, qs, r, perms, note):
    for s in perms:
        # (p.s) o (q_0..q_{n-1}) plugs q_i into slot s[i] of p
        moved = [None] * len(qs)
        for i, si in enumerate(s):
            moved[si] = qs[i]
        block = [j for i in range(len(qs)) for j in _block(s[i], moved, P)]
        lhs = P.compose(P.act(p, s), qs)
        rhs = P.act(P.compose(p, moved), block)
        if lhs != rhs:
            note(f"equivariance: ({p!r}.{s}) o {list(qs)!r}")


def _block(slot, moved, P):
    start = sum(P.arity(q) for q in moved[:slot])
    return range(start, start + P.arity(moved[slot]))


# dendrices ---------------------------------------------------------------


@dataclass(frozen=True)
class Dendrex:
    """An element of the nerve over ``tree``: colours on edges and, at each
    vertex, an operation whose inputs follow the sorted input edges."""

    tree: Tree
    colours: tuple
    ops: tuple

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.tree, self.colours, self.ops))
            object.__setattr__(self, "_hash", h)
        return h

    def colour(self, e):
        return self.colours[self.tree.edges.index(e)]

    def op(self, v):
        return self.ops[self.tree.vertices.index(v)]

    @property
    def colour_map(self) -> dict:
        return dict(zip(self.tree.edges, self.colours))

    @property
    def op_map(self) -> dict:
        return dict(zip(self.tree.vertices, self.ops))



def nerve_dendrices(P: Operad, T: Tree, fixed: dict | None = None,
                    fixed_ops: dict | None = None) -> list[Dendrex]:
    """All dendrices over ``T`` in generation order (colours, then operations,
    each in the operad's order).  ``fixed`` pins edge colours and
    ``fixed_ops`` pins vertex operations."""
    fixed = fixed or {}
    fixed_ops = fixed_ops or {}
    order = []
    stack = [T.root]
    while stack:
        v = stack.pop()
        if T.is_vertex(v):
            order.append(v)
            stack.extend(T.inputs(v))
    found = []
    edges, vertices = T.edges, T.vertices

    def rec(i, colours, ops):
        if i == len(order):
            found.append(Dendrex(T, tuple(colours[e] for e in edges),
                                 tuple(ops[v] for v in vertices)))
            return
        v = order[i]
        kids = T.inputs(v)
        if v in fixed_ops:
            p = fixed_ops[v]
            cands = [p] if P.output(p) == colours[v] else []
        else:
            cands = P.ops_with_output(colours[v], len(kids))
        for p in cands:
            ins = P.profile(p)[0]
            if any(fixed.get(e, c) != c for e, c in zip(kids, ins)):
                continue
            nc = dict(colours)
            nc.update(zip(kids, ins))
            ops[v] = p
            rec(i + 1, nc, ops)
        ops.pop(v, None)

    roots = [fixed[T.root]] if T.root in fixed else P.colours
    for c in roots:
        rec(0, {T.root: c}, {})
    return found


def validate_dendrex(P: Operad, x: Dendrex) -> bool:
    cm = x.colour_map
    for v, p in x.op_map.items():
        ins, out = P.profile(p)
        if out != cm[v] or tuple(ins) != tuple(cm[e] for e in x.tree.inputs(v)):
            return False
    return True


@lru_cache(maxsize=1 << 18)
def evaluate(P: Operad, x: Dendrex, op: FreeOperation):
    """The operation of ``P`` that ``x`` assigns to a free operation of its
    tree, with inputs in sorted edge order."""
    T = x.tree
    cm = x.colour_map
    om = x.op_map
    ins = op.inputs

    def fold(e):
        if e in ins:
            return P.identity(cm[e]), [e]
        kids = T.inputs(e)
        parts = [fold(k) for k in kids]
        result = P.compose(om[e], [p for p, _ in parts])
        return result, [l for _, ls in parts for l in ls]

    if not T.is_vertex(op.output) or op.output in ins:
        if ins != {op.output}:
            raise OperadError(f"{op!r} is not an operation of the tree")
        return P.identity(cm[op.output])
    result, labels = fold(op.output)
    if set(labels) != set(ins):
        raise OperadError(f"{op!r} is not an operation of the tree")
    return P.act(result, argsort(labels))


def _lookup(obj, name: str, build):
    # read-only tables kept on frozen objects that restriction sees repeatedly
    d = obj.__dict__
    if name not in d:
        object.__setattr__(obj, name, build())
    return d[name]


def restrict(P: Operad, x: Dendrex, m) -> Dendrex:
    """Pull ``x`` back along an Omega morphism (or face) into ``x.tree``."""
    if not isinstance(m, OmegaMorphism):
        m = m.morphism
    if m.codomain != x.tree:
        raise OperadError("morphism does not land in the dendrex's tree")
    T = m.domain
    em = _lookup(m, "_em", lambda: dict(zip(m.domain.edges, m.images)))
    cm = _lookup(x, "_cm", lambda: dict(zip(x.tree.edges, x.colours)))
    colours = tuple(cm[em[e]] for e in T.edges)
    src = x.tree
    om = _lookup(x, "_om", lambda: dict(zip(x.tree.vertices, x.ops)))
    ops = []
    for v in T.vertices:
        kids = T.inputs(v)
        images = [em[k] for k in kids]
        w = em[v]
        if src.is_vertex(w) and src.inputs(w) == tuple(images):
            ops.append(om[w])
            continue
        p = evaluate(P, x, FreeOperation(em[v], frozenset(images)))
        # p follows sorted(images); reorder to follow kids
        ops.append(P.act(p, argsort(argsort(images))))
    return Dendrex(T, colours, tuple(ops))


def omega_as_operad(T: Tree) -> OmegaOperad:
    return OmegaOperad(T)


def dendrex_to_morphism(x: Dendrex, S: Tree) -> OmegaMorphism:
    """A dendrex of the nerve of Omega(S) read as a map of trees into ``S``."""
    return OmegaMorphism(x.tree, S, x.colours)


def morphism_to_dendrex(m: OmegaMorphism) -> Dendrex:
    em = m.edge_map
    ops = tuple((em[v], tuple(em[e] for e in m.domain.inputs(v))) for v in m.domain.vertices)
    return Dendrex(m.domain, m.images, ops)


# underlying category -------------------------------------------------------


def underlying_category_nerve(P: Operad, k: int) -> list[Dendrex]:
    """k-simplices of the nerve of the underlying category of ``P``."""
    return nerve_dendrices(P, linear_tree(k))


def linear_face(k: int, i: int):
    """The face of the linear tree [k] that drops object ``i``.

    Object ``j`` sits on the edge at depth ``k - j``: leaf is 0, root is k.
    """
    T = linear_tree(k)
    e = (0,) * (k - i)
    if k == 0:
        raise OperadError("[0] has no faces")
    if k == 1:
        return omega.corolla_edge_face(T, (0,) if i == 1 else ())
    if 0 < i < k:
        return omega.inner_face(T, e)
    if i == 0:
        return omega.leaf_face(T, (0,) * (k - 1))
    return omega.root_face(T)


def linear_degeneracy(k: int, i: int) -> OmegaMorphism:
    return omega.degeneracy(linear_tree(k), (0,) * (k - i))


def relabel_dendrex(P: Operad, x: Dendrex, mapping: dict) -> Dendrex:
    """Move ``x`` onto the relabelled tree; input orders are fixed up."""
    new = relabel(x.tree, mapping)
    back = {mapping[e]: e for e in x.tree.edges}
    return restrict(P, x, OmegaMorphism.from_map(new, x.tree, back))
