"""Finite rooted non-planar trees.

A tree is stored as a root edge plus a map from vertices to their input
edges.  Vertices are identified with their output edges, so a tree is
entirely described by edge labels.  Labels may be any hashable values that
are mutually comparable; trees built from terms use root-to-leaf index
paths (tuples of ints), forests of pointed-set chains use ``(level, x)``.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Hashable, Iterable, Mapping, NamedTuple

Edge = Hashable


class TreeError(ValueError):
    pass


class Tree:
    __slots__ = ("root", "_inputs", "_parent", "edges", "vertices", "_hash")

    def __init__(self, root: Edge, inputs: Mapping[Edge, Iterable[Edge]] | None = None):
        ins = {v: tuple(sorted(es)) for v, es in (inputs or {}).items()}
        parent: dict[Edge, Edge] = {}
        for v, es in ins.items():
            for e in es:
                if e in parent:
                    raise TreeError(f"edge {e!r} enters two vertices")
                parent[e] = v
        if root in parent:
            raise TreeError("root edge cannot be an input")
        edges = {root} | set(parent)
        missing = set(ins) - edges
        if missing:
            raise TreeError(f"vertex outputs not attached: {sorted(missing)!r}")
        # every edge must reach the root
        for e in edges:
            seen = set()
            while e != root:
                if e in seen:
                    raise TreeError("cycle in parent relation")
                seen.add(e)
                e = parent[e]
        self.root = root
        self._inputs = ins
        self._parent = parent
        self.edges: tuple = tuple(sorted(edges))
        self.vertices: tuple = tuple(sorted(ins))
        self._hash = hash((root, tuple(sorted(ins.items()))))

    @classmethod
    def corolla_on(cls, root: Edge, leaves: Iterable[Edge]) -> Tree:
        """A one-vertex tree, built without the consistency checks; the
        leaves must be distinct and differ from the root."""
        t = object.__new__(cls)
        ins = tuple(sorted(leaves))
        t.root = root
        t._inputs = {root: ins}
        t._parent = dict.fromkeys(ins, root)
        t.edges = tuple(sorted(ins + (root,)))
        t.vertices = (root,)
        t._hash = hash((root, ((root, ins),)))
        return t

    # structure -----------------------------------------------------------
    def inputs(self, v: Edge) -> tuple:
        """Input edges of vertex ``v`` in sorted order."""
        return self._inputs[v]

    def parent(self, e: Edge) -> Edge | None:
        """The vertex that ``e`` enters, or None for the root."""
        return self._parent.get(e)

    def is_vertex(self, e: Edge) -> bool:
        return e in self._inputs

    def input_map(self) -> dict:
        return dict(self._inputs)

    @property
    def is_eta(self) -> bool:
        return not self._inputs

    @property
    def leaves(self) -> tuple:
        """Edges that are neither the root nor a vertex output."""
        return tuple(e for e in self.edges if e != self.root and e not in self._inputs)

    @property
    def input_edges(self) -> tuple:
        """Inputs of the total operation of the tree (the root for eta)."""
        if self.is_eta:
            return (self.root,)
        return self.leaves

    @property
    def inner_edges(self) -> tuple:
        return tuple(e for e in self.vertices if e != self.root)

    def stumps(self) -> tuple:
        return tuple(v for v in self.vertices if not self._inputs[v])

    def leaf_vertices(self) -> tuple:
        """Vertices whose inputs are all leaves (stumps included)."""
        return tuple(v for v in self.vertices if all(e not in self._inputs for e in self._inputs[v]))

    def above(self, e: Edge) -> tuple:
        """All edges ``x`` with ``e <= x``, in sorted order."""
        out = []
        stack = [e]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self._inputs.get(x, ()))
        return tuple(sorted(out))

    def subtree(self, e: Edge) -> Tree:
        """The full subtree whose root is ``e``."""
        keep = set(self.above(e))
        return Tree(e, {v: es for v, es in self._inputs.items() if v in keep})

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tree) and self.root == other.root and self._inputs == other._inputs

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Tree({to_term(self)})"


class EdgeClasses(NamedTuple):
    root: Edge
    inner: frozenset
    leaves: frozenset


# constructors ---------------------------------------------------------------


def eta() -> Tree:
    return Tree(())


def corolla(n: int) -> Tree:
    if n < 0:
        raise TreeError("arity must be >= 0")
    return Tree((), {(): [(i,) for i in range(n)]})


def linear_tree(k: int) -> Tree:
    """The linear tree with ``k`` unary vertices (the simplex [k])."""
    inputs = {}
    e: tuple = ()
    for _ in range(k):
        inputs[e] = [e + (0,)]
        e = e + (0,)
    return Tree((), inputs)


def from_children(children: Iterable[Tree] | None) -> Tree:
    """``None`` gives eta; a (possibly empty) list gives a vertex over them."""
    if children is None:
        return eta()
    inputs: dict = {(): []}
    for i, child in enumerate(children):
        child = to_paths(child)
        inputs[()].append((i,))
        for v, es in child.input_map().items():
            inputs[(i,) + v] = [(i,) + x for x in es]
    return Tree((), inputs)


def relabel(t: Tree, mapping: Mapping[Edge, Edge]) -> Tree:
    return Tree(mapping[t.root], {mapping[v]: [mapping[e] for e in es] for v, es in t.input_map().items()})


def to_paths(t: Tree, order=None) -> Tree:
    """Relabel edges by root-to-edge child-index paths.

    Children are ordered by ``order`` (a key on edges) or by label.
    """
    mapping = path_labels(t, order)
    return relabel(t, mapping)


def path_labels(t: Tree, order=None) -> dict:
    mapping = {t.root: ()}
    stack = [t.root]
    while stack:
        v = stack.pop()
        if not t.is_vertex(v):
            continue
        kids = sorted(t.inputs(v), key=order) if order else t.inputs(v)
        for i, e in enumerate(kids):
            mapping[e] = mapping[v] + (i,)
            stack.append(e)
    return mapping


def graft(base: Tree, leaf: Edge, scion: Tree) -> Tree:
    """Identify the root of ``scion`` with the leaf ``leaf`` of ``base``."""
    if base.is_eta:
        if leaf != base.root:
            raise TreeError(f"{leaf!r} is not an edge of eta")
    elif leaf not in base.leaves:
        raise TreeError(f"{leaf!r} is not a leaf edge")
    inputs = {(0, v): [(0, e) for e in es] for v, es in base.input_map().items()}
    tag = {scion.root: (0, leaf)}
    tag.update({e: (1, e) for e in scion.edges if e != scion.root})
    for v, es in scion.input_map().items():
        inputs[tag[v]] = [tag[e] for e in es]
    return to_paths(Tree((0, base.root), inputs))


# queries ----------------------------------------------------------------


def classify_edges(t: Tree) -> EdgeClasses:
    return EdgeClasses(t.root, frozenset(t.inner_edges), frozenset(t.leaves))


def edge_leq(t: Tree, e1: Edge, e2: Edge) -> bool:
    """True iff the path from ``e2`` down to the root passes through ``e1``."""
    for e in (e1, e2):
        if e not in t.edges:
            raise TreeError(f"unknown edge {e!r}")
    e = e2
    while e is not None:
        if e == e1:
            return True
        e = t.parent(e)
    return False


# canonical codes -----------------------------------------------------------


def _code_at(t: Tree, e: Edge, memo: dict) -> str:
    if e in memo:
        return memo[e]
    if not t.is_vertex(e):
        code = "|"
    else:
        code = "(" + "".join(sorted(_code_at(t, x, memo) for x in t.inputs(e))) + ")"
    memo[e] = code
    return code


def edge_codes(t: Tree) -> dict:
    """Canonical code of the subtree above every edge."""
    memo: dict = {}
    for e in t.edges:
        _code_at(t, e, memo)
    return memo


def canonical_code(t: Tree) -> str:
    """AHU-style code: ``|`` for a leaf, ``(...)`` for a vertex, ``()`` a stump."""
    return _code_at(t, t.root, {})


def canonical_form(t: Tree) -> Tree:
    """Path-labelled representative with children sorted by code."""
    codes = edge_codes(t)
    return to_paths(t, order=lambda e: (codes[e], e))


def automorphism_count(t: Tree) -> int:
    codes = edge_codes(t)
    count = 1
    for v in t.vertices:
        for k in Counter(codes[e] for e in t.inputs(v)).values():
            count *= math.factorial(k)
    return count


def is_isomorphic(s: Tree, t: Tree) -> bool:
    return canonical_code(s) == canonical_code(t)


# enumeration ----------------------------------------------------------------


def _code_to_tree(code: str) -> Tree:
    pos = 0

    def parse():
        nonlocal pos
        if code[pos] == "|":
            pos += 1
            return None
        pos += 1
        kids = []
        while code[pos] != ")":
            kids.append(parse())
        pos += 1
        return kids

    def build(node):
        if node is None:
            return None
        return [build_tree(k) for k in node]

    def build_tree(node):
        return from_children(build(node))

    return build_tree(parse())


def enumerate_trees(max_vertices: int, max_arity: int) -> list[Tree]:
    """All trees with at most the given vertex count and vertex arity.

    Returned up to isomorphism, ordered by vertex count then code.
    """
    if max_vertices < 0 or max_arity < 0:
        raise TreeError("bounds must be >= 0")
    # codes[n] = sorted codes of edges carrying exactly n vertices above them
    codes: list[list[str]] = [["|"]]
    for n in range(1, max_vertices + 1):
        found = set()
        for arity in range(max_arity + 1):
            for kids in _multisets(codes, n - 1, arity):
                found.add("(" + "".join(sorted(kids)) + ")")
        codes.append(sorted(found))
    out = []
    for n in range(max_vertices + 1):
        out.extend(_code_to_tree(c) for c in codes[n])
    return out


def _multisets(codes: list[list[str]], total: int, count: int):
    """Multisets of ``count`` codes whose vertex counts sum to ``total``."""
    flat = [(n, c) for n, cs in enumerate(codes) for c in cs]

    def rec(start, remaining, left):
        if left == 0:
            if remaining == 0:
                yield []
            return
        for i in range(start, len(flat)):
            n, c = flat[i]
            if n <= remaining:
                for rest in rec(i, remaining - n, left - 1):
                    yield [c] + rest

    yield from rec(0, total, count)


# term grammar ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(eta|v\[|\]|,)")


class TermError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")
        self.column = pos + 1


def parse_term(text: str) -> Tree:
    """Parse ``eta`` / ``v[T, ...]`` / ``v[]`` into a path-labelled tree."""
    pos = 0
    start = 0  # where the last token began, for error columns

    def token():
        nonlocal pos, start
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermError("unexpected input", text, len(text) - len(text[pos:].lstrip()))
        pos, start = m.end(), m.start(1)
        return m.group(1)

    def peek():
        m = _TOKEN.match(text, pos)
        return m.group(1) if m else None

    def term():
        tok = token()
        if tok == "eta":
            return None
        if tok != "v[":
            raise TermError(f"unexpected {tok!r}", text, start)
        kids = []
        if peek() == "]":
            token()
            return kids
        while True:
            kids.append(term())
            tok = token()
            if tok == "]":
                return kids
            if tok != ",":
                raise TermError(f"expected ',' or ']' not {tok!r}", text, start)

    node = term()
    if text[pos:].strip():
        raise TermError("trailing input", text, len(text) - len(text[pos:].lstrip()))

    def build(n):
        return from_children(None if n is None else [build(k) for k in n])

    return build(node)


def to_term(t: Tree) -> str:
    def rec(e):
        if not t.is_vertex(e):
            return "eta"
        return "v[" + ",".join(rec(x) for x in t.inputs(e)) + "]"

    return rec(t.root)


def parse_edge(t: Tree, text: str) -> Edge:
    """Address an edge of a path-labelled tree by ``"0.1"`` (``""`` = root)."""
    text = text.strip()
    path = tuple(int(p) for p in text.split(".")) if text else ()
    if path not in t.edges:
        raise TreeError(f"no edge at path {text!r}")
    return path


def format_edge(e: Edge) -> str:
    if isinstance(e, tuple) and all(isinstance(i, int) for i in e):
        return ".".join(map(str, e)) or "root"
    return repr(e)
