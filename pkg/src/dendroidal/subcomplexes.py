"""Subobjects of representables and the lifting solver against nerves.

A cell is a face of the ambient tree, stored as the face's domain tree
(which keeps the ambient labels) and keyed by :func:`omega.face_key`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from . import omega
from .omega import FaceMono, OmegaMorphism, face_key
from .operads import Dendrex, Operad, argsort, evaluate, nerve_dendrices, restrict
from .trees import Tree, canonical_code


class SubcomplexError(ValueError):
    pass


@lru_cache(maxsize=1 << 12)
def face_closure(t: Tree) -> dict:
    """All faces of ``t`` (itself included) as trees keyed by image.

    A face is cut out by an operation of the free operad on ``t`` (an
    output edge and a closed set of inputs) together with any subset of the
    inner edges of that region, which stay as edges while the rest are
    contracted.  The identity operations give the single edges.
    """
    cells = {}
    for op in omega.all_operations(t):
        if op.is_identity:
            cells[face_key(Tree(op.output))] = Tree(op.output)
            continue
        r = op.output
        inner = [v for v in omega.region(t, r, op.inputs) if v != r]
        for n in range(len(inner) + 1):
            for kept in itertools.combinations(inner, n):
                face = _cut(t, r, op.inputs, kept)
                cells[face_key(face)] = face
    return cells


def _cut(t: Tree, r, ins: frozenset, kept) -> Tree:
    verts = (r,) + tuple(kept)
    stop = ins | set(kept)
    inputs = {}
    for v in verts:
        found = []
        stack = list(t.inputs(v))
        while stack:
            e = stack.pop()
            if e in stop:
                found.append(e)
            else:
                stack.extend(t.inputs(e))
        inputs[v] = found
    return Tree(r, inputs)


@lru_cache(maxsize=1 << 16)
def face_keys(t: Tree) -> frozenset:
    """Keys of all faces of ``t``, without building the face trees."""
    keys = set()
    for op in omega.all_operations(t):
        if op.is_identity:
            keys.add((frozenset((op.output,)), frozenset()))
            continue
        r = op.output
        inner = [v for v in omega.region(t, r, op.inputs) if v != r]
        outer = op.inputs | {r}
        for n in range(len(inner) + 1):
            for kept in itertools.combinations(inner, n):
                keys.add((outer.union(kept), frozenset((r,) + kept)))
    return frozenset(keys)


@lru_cache(maxsize=1 << 16)
def elementary_face_keys(t: Tree) -> tuple:
    return tuple(face_key(f.domain) for f in omega.elementary_faces(t))


def all_face_monos(T: Tree, order: str = "bfs") -> list[FaceMono]:
    """Every composite of elementary faces into ``T``, one per image."""
    seen = {face_key(T): T}
    todo = [T]
    while todo:
        s = todo.pop(0) if order == "bfs" else todo.pop()
        for f in omega.elementary_faces(s):
            k = face_key(f.domain)
            if k not in seen:
                seen[k] = f.domain
                todo.append(f.domain)
    return [FaceMono(d, T, omega.IDENTITY if d == T else omega.COMPOSITE)
            for _, d in sorted(seen.items(), key=lambda kv: _cell_order(kv[1]))]


def _cell_order(t: Tree):
    return (-len(t.edges), -len(t.vertices), canonical_code(t), repr(t.edges), repr(t.vertices))


def inclusion(small: Tree, big: Tree) -> OmegaMorphism:
    return OmegaMorphism(small, big, small.edges)


@dataclass(frozen=True)
class Subcomplex:
    ambient: Tree
    cells: frozenset  # keys of all cells, downward closed

    @classmethod
    def generated(cls, ambient: Tree, trees) -> Subcomplex:
        keys = set()
        for t in trees:
            keys.update(face_keys(t))
        return cls(ambient, frozenset(keys))

    @classmethod
    def empty(cls, ambient: Tree) -> Subcomplex:
        return cls(ambient, frozenset())

    @classmethod
    def full(cls, ambient: Tree) -> Subcomplex:
        return cls.generated(ambient, [ambient])

    def tree(self, key) -> Tree:
        return face_closure(self.ambient)[key]

    @property
    def maximal(self) -> list:
        """Keys of maximal cells, in canonical order."""
        return list(_maximal(self.ambient, self.cells))

    def is_full(self) -> bool:
        return face_key(self.ambient) in self.cells

    def __contains__(self, key) -> bool:
        return key in self.cells

    def __len__(self) -> int:
        return len(self.cells)


@lru_cache(maxsize=1 << 14)
def _maximal(ambient: Tree, keys: frozenset) -> tuple:
    cells = face_closure(ambient)
    below = set()
    for k in keys:
        below.update(elementary_face_keys(cells[k]))
    out = [k for k in keys if k not in below]
    return tuple(sorted(out, key=lambda k: _cell_order(cells[k])))


def _same_ambient(a: Subcomplex, b: Subcomplex):
    if a.ambient != b.ambient:
        raise SubcomplexError("subcomplexes live in different trees")


def union(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    _same_ambient(a, b)
    return Subcomplex(a.ambient, a.cells | b.cells)


def intersect(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    _same_ambient(a, b)
    return Subcomplex(a.ambient, a.cells & b.cells)


def is_subcomplex(a: Subcomplex, b: Subcomplex) -> bool:
    _same_ambient(a, b)
    return a.cells <= b.cells


def is_downward_closed(a: Subcomplex) -> bool:
    return all(face_keys(a.tree(k)) <= a.cells for k in a.cells)


# named subcomplexes ---------------------------------------------------------


@lru_cache(maxsize=1 << 12)
def boundary(T: Tree) -> Subcomplex:
    return Subcomplex.generated(T, [f.domain for f in omega.elementary_faces(T)])


def _all_but(T: Tree, missing: FaceMono) -> Subcomplex:
    faces = [f.domain for f in omega.elementary_faces(T) if f.key != missing.key]
    return Subcomplex.generated(T, faces)


@lru_cache(maxsize=1 << 12)
def inner_horn(T: Tree, e) -> Subcomplex:
    return _all_but(T, omega.inner_face(T, e))


@lru_cache(maxsize=1 << 12)
def leaf_horn(T: Tree, v) -> Subcomplex:
    return _all_but(T, omega.leaf_face(T, v))


@lru_cache(maxsize=1 << 12)
def root_horn(T: Tree) -> Subcomplex:
    return _all_but(T, omega.root_face(T))


def corolla_at(T: Tree, v) -> Tree:
    return Tree(v, {v: T.inputs(v)})


@lru_cache(maxsize=1 << 12)
def spine(T: Tree) -> Subcomplex:
    if T.is_eta:
        return Subcomplex.full(T)
    return Subcomplex.generated(T, [corolla_at(T, v) for v in T.vertices])


# maps into nerves -------------------------------------------------------------


@dataclass(frozen=True)
class PresheafMap:
    """A map from a subcomplex into the nerve of ``operad``, given by its
    values on maximal cells."""

    source: Subcomplex
    operad: Operad = field(compare=False)
    values: tuple  # ((key, Dendrex), ...) over maximal cells in canonical order

    @property
    def value_map(self) -> dict:
        return dict(self.values)

    def at(self, key) -> Dendrex:
        """Value on any cell, by restriction from a maximal cell."""
        vm = self.value_map
        if key in vm:
            return vm[key]
        for k, x in self.values:
            if key in face_keys(self.source.tree(k)):
                return _restrict_cached(self.operad, x, self.source.tree(key))
        raise SubcomplexError("cell not in the source subcomplex")

    def restrict_to(self, sub: Subcomplex) -> PresheafMap:
        if not sub.cells <= self.source.cells:
            raise SubcomplexError("not a subcomplex of the source")
        return PresheafMap(sub, self.operad, tuple((k, self.at(k)) for k in sub.maximal))


@lru_cache(maxsize=1 << 18)
def _restrict_cached(P: Operad, x: Dendrex, small: Tree) -> Dendrex:
    if small == x.tree:
        return x
    return restrict(P, x, inclusion(small, x.tree))


@lru_cache(maxsize=1 << 16)
def _common_maximal(ambient: Tree, a, b) -> tuple:
    cells = face_closure(ambient)
    sub = Subcomplex(ambient, face_keys(cells[a]) & face_keys(cells[b]))
    return tuple(sub.maximal)


def compatible(P: Operad, ambient: Tree, ka, xa: Dendrex, kb, xb: Dendrex) -> bool:
    """Do two cell values agree on every common face?"""
    cells = face_closure(ambient)
    for k in _common_maximal(ambient, ka, kb):
        t = cells[k]
        if _restrict_cached(P, xa, t) != _restrict_cached(P, xb, t):
            return False
    return True


def is_compatible_family(P: Operad, sub: Subcomplex, values: dict) -> bool:
    items = sorted(values.items(), key=lambda kv: _cell_order(sub.tree(kv[0])))
    for (ka, xa), (kb, xb) in itertools.combinations(items, 2):
        if not compatible(P, sub.ambient, ka, xa, kb, xb):
            return False
    return True


def empty_map(P: Operad, T: Tree) -> PresheafMap:
    return PresheafMap(Subcomplex.empty(T), P, ())


def extend(P: Operad, A: Subcomplex, B: Subcomplex, f: PresheafMap) -> list[PresheafMap]:
    """All extensions of ``f: A -> NP`` to ``B``.

    A map into a nerve amounts to a colour per edge and an operation per
    corolla cell, subject to one rule per inner face present: the corolla
    of the merged vertex carries the composite of the two corollas it
    merges.  We branch on the open corollas (vertices of the ambient tree
    first) and propagate composites as soon as both halves are known.

    ``P`` must satisfy the operad axioms (see ``validate_operad``).  A value
    obtained by composing values of vertices of the ambient tree is then the
    same whichever way it was composed, so such values are compared only
    against values that were chosen freely or read off ``f``.
    """
    _same_ambient(A, B)
    if not A.cells <= B.cells:
        raise SubcomplexError("A is not contained in B")
    T = B.ambient
    cells = face_closure(T)
    plan = _plan(T, B.cells, A.cells)
    given = A.cells
    real = plan.real
    colours: dict = {}
    for _, x in f.values:
        colours.update(zip(x.tree.edges, x.colours))
    out = []

    # ops maps a corolla key to (operation, composed from tree vertices?)
    def op_of(ops, k):
        v = ops.get(k)
        if v is None and k in given:
            v = ops[k] = (_corolla_op(P, f, cells, k), k in real)
        return v

    def assign(colours, ops, k, p, pure) -> bool:
        stack = [(k, p, pure)]
        while stack:
            k, p, pure = stack.pop()
            old = op_of(ops, k)
            if old is not None:
                if pure and old[1]:
                    continue
                if old[0] != p:
                    return False
                if pure:
                    # the stored value agrees with a composite of vertices
                    ops[k] = (p, True)
                continue
            ops[k] = (p, pure)
            for low, up, e, merged in plan.rules[k]:
                a, b = op_of(ops, low), op_of(ops, up)
                if a is None or b is None:
                    continue
                both = a[1] and b[1]
                m = ops.get(merged)
                if both and m is not None and m[1]:
                    continue
                stack.append((merged, _merge(P, colours, low, up, e, a[0], b[0]), both))
        return True

    def rec(colours, ops):
        k = _next_choice(plan, colours, ops, given)
        if k is None:
            for e in plan.free_edges:
                if e not in colours:
                    for c in P.colours:
                        rec({**colours, e: c}, ops)
                    return
            out.append(PresheafMap(B, P, tuple(
                (m, _assemble(P, f, cells, m, colours, lambda k: op_of(ops, k)[0]))
                for m in plan.maximal)))
            return
        t = cells[k]
        for x in nerve_dendrices(P, t, {e: colours[e] for e in t.edges if e in colours}):
            nc = {**colours, **dict(zip(t.edges, x.colours))}
            no = dict(ops)
            if assign(nc, no, k, x.ops[0], k in real):
                rec(nc, no)

    ops: dict = {}
    for low, up, e, merged in plan.pending:
        a, b = op_of(ops, low), op_of(ops, up)
        m = op_of(ops, merged)
        if a[1] and b[1] and m is not None and m[1]:
            continue
        if not assign(colours, ops, merged, _merge(P, colours, low, up, e, a[0], b[0]), a[1] and b[1]):
            return out
    rec(colours, ops)
    return out


class _Plan:
    """Static data for solving over ``B`` given ``A`` inside one tree."""

    def __init__(self, T: Tree, keys: frozenset, given: frozenset):
        cells = face_closure(T)
        order = sorted(keys, key=lambda k: _cell_order(cells[k]))
        self.maximal = _maximal(T, keys)
        self.real = frozenset(_corolla_key(T, v) for v in T.vertices)
        rules = set()
        for k in order:
            t = cells[k]
            if len(t.vertices) < 2:
                continue
            for e in t.inner_edges:
                face = omega.inner_face(t, e).domain
                fk = face_key(face)
                if fk not in keys or (k in given and fk in given):
                    continue
                low = t.parent(e)
                rules.add((_corolla_key(t, low), _corolla_key(t, e), e,
                           _corolla_key(face, low)))
        self.rules: dict = {}
        for k in keys:
            if len(cells[k].vertices) == 1:
                self.rules[k] = []
        # smaller merged corollas first, so that checked values can vouch
        # for the larger composites built from them
        rules = sorted(rules, key=lambda r: (len(r[3][0]), repr(r)))
        for rule in rules:
            self.rules[rule[0]].append(rule)
            self.rules[rule[1]].append(rule)
        # rules whose halves both lie in A can fire before any branching
        self.pending = [r for r in rules if r[0] in given and r[1] in given]
        open_corollas = [k for k in order if k not in given and len(cells[k].vertices) == 1]

        def priority(k):
            t = cells[k]
            return t.inputs(t.root) != T.inputs(t.root)

        self.choices = tuple((k, priority(k), cells[k].edges)
                             for k in sorted(open_corollas, key=lambda k: (priority(k), len(cells[k].edges))))
        covered = {e for k in keys if len(cells[k].vertices) == 1 for e in cells[k].edges}
        self.free_edges = tuple(sorted(next(iter(k[0])) for k in keys
                                       if not k[1] and next(iter(k[0])) not in covered))


def _next_choice(plan: _Plan, colours: dict, ops: dict, given: frozenset):
    """The open corolla with the best static priority, ties broken towards
    the one with most coloured edges so that branching stays connected."""
    best = None
    for k, rank, edges in plan.choices:
        if k in ops or k in given:
            continue
        if best is not None and rank > best[0][0]:
            break
        score = (rank, -sum(e in colours for e in edges), len(edges))
        if best is None or score < best[0]:
            best = (score, k)
    return None if best is None else best[1]


@lru_cache(maxsize=1 << 12)
def _plan(T: Tree, keys: frozenset, given: frozenset) -> _Plan:
    return _Plan(T, keys, given)


def _corolla_key(t: Tree, v) -> tuple:
    return (frozenset((v,) + t.inputs(v)), frozenset((v,)))


def _corolla_parts(k) -> tuple:
    (v,) = k[1]
    return v, tuple(sorted(k[0] - {v}))


def _merge(P: Operad, colours, low, up, e, p1, p2):
    """The operation on the merged corolla: ``p2`` plugged into ``p1`` at
    ``e``, with inputs put back in sorted order."""
    v, kids = _corolla_parts(low)
    _, above = _corolla_parts(up)
    i = kids.index(e)
    parts = [P.identity(colours[x]) for x in kids]
    parts[i] = p2
    labels = kids[:i] + above + kids[i + 1:]
    return P.act(P.compose(p1, parts), argsort(labels))


def _corolla_op(P: Operad, f: PresheafMap, cells, k):
    v, kids = _corolla_parts(k)
    for mk, x in f.values:
        if k in face_keys(cells[mk]):
            t = x.tree
            if t.is_vertex(v) and t.inputs(v) == kids:
                return x.op(v)
            return evaluate(P, x, omega.FreeOperation(v, frozenset(kids)))
    raise SubcomplexError("corolla not in the source subcomplex")


def _assemble(P: Operad, f: PresheafMap, cells, key, colours: dict, op_of) -> Dendrex:
    t = cells[key]
    for mk, x in f.values:
        if mk == key:
            return x
    ops = tuple(op_of(_corolla_key(t, v)) for v in t.vertices)
    return Dendrex(t, tuple(colours[e] for e in t.edges), ops)


def maps_to_nerve(P: Operad, A: Subcomplex) -> list[PresheafMap]:
    return extend(P, Subcomplex.empty(A.ambient), A, empty_map(P, A.ambient))


def brute_force_maps(P: Operad, A: Subcomplex) -> list[PresheafMap]:
    """Product of dendrices over maximal cells filtered by pairwise
    agreement on common faces (partial products are pruned early)."""
    keys = A.maximal
    pools = [nerve_dendrices(P, A.tree(k)) for k in keys]
    out = []

    def rec(i, chosen):
        if i == len(keys):
            out.append(PresheafMap(A, P, tuple(zip(keys, chosen))))
            return
        for x in pools[i]:
            if all(compatible(P, A.ambient, keys[i], x, keys[j], y) for j, y in enumerate(chosen)):
                rec(i + 1, chosen + [x])

    rec(0, [])
    return out


def brute_force_extend(P: Operad, A: Subcomplex, B: Subcomplex, f: PresheafMap) -> list[PresheafMap]:
    """Oracle for :func:`extend`: every map on ``B`` whose restriction is ``f``."""
    return [g for g in brute_force_maps(P, B) if g.restrict_to(A).values == f.values]


# normality -----------------------------------------------------------------


def factors_through(m: OmegaMorphism, sub: Subcomplex) -> bool:
    cells = face_closure(sub.ambient)
    for k in sub.cells:
        t = cells[k]
        if set(m.images) <= set(t.edges):
            if omega.validate_morphism(OmegaMorphism(m.domain, t, m.images)):
                return True
    return False


def normality_violations(sub: Subcomplex, S: Tree) -> list:
    """Maps ``S -> T`` outside ``sub`` fixed by a non-identity automorphism."""
    autos = [a for a in omega.hom_set(S, S) if omega.is_iso(a) and a.images != S.edges]
    bad = []
    for m in omega.hom_set(S, sub.ambient):
        if factors_through(m, sub):
            continue
        for a in autos:
            if omega.compose(m, a).images == m.images:
                bad.append((m, a))
    return bad
