"""Morphisms of the tree category as validated edge maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .trees import Edge, Tree, TreeError, path_labels, to_paths


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class FreeOperation:
    """An operation of the free operad on a tree: a region cut out by
    an output edge and a set of pairwise incomparable input edges."""

    output: Edge
    inputs: frozenset

    @property
    def is_identity(self) -> bool:
        return self.inputs == frozenset([self.output])


def region(S: Tree, out: Edge, ins) -> list | None:
    """Vertices strictly between ``out`` and ``ins``; None if not closed."""
    ins = frozenset(ins)
    if ins == {out}:
        return []
    if not S.is_vertex(out) or out in ins:
        return None
    verts = []
    dangling = set()
    stack = [out]
    while stack:
        v = stack.pop()
        verts.append(v)
        for e in S.inputs(v):
            if e in ins or not S.is_vertex(e):
                dangling.add(e)
            else:
                stack.append(e)
    if dangling != ins:
        return None
    return sorted(verts)


def operation_exists(S: Tree, out: Edge, ins) -> FreeOperation | None:
    if out not in S.edges or any(e not in S.edges for e in ins):
        return None
    if region(S, out, ins) is None:
        return None
    return FreeOperation(out, frozenset(ins))


@lru_cache(maxsize=4096)
def operations_by_output(S: Tree) -> dict:
    """Every free operation of ``S`` grouped by output edge."""
    cuts: dict = {}

    def cut(e):
        if e in cuts:
            return cuts[e]
        found = [frozenset([e])]
        if S.is_vertex(e):
            parts = [cut(x) for x in S.inputs(e)]
            for combo in itertools.product(*parts):
                found.append(frozenset().union(*combo))
        cuts[e] = found
        return found

    return {e: [FreeOperation(e, c) for c in cut(e)] for e in S.edges}


def all_operations(S: Tree) -> list[FreeOperation]:
    ops = operations_by_output(S)
    return [op for e in S.edges for op in ops[e]]


@dataclass(frozen=True)
class OmegaMorphism:
    domain: Tree
    codomain: Tree
    images: tuple  # aligned with domain.edges

    @classmethod
    def from_map(cls, domain: Tree, codomain: Tree, mapping: Mapping) -> OmegaMorphism:
        return cls(domain, codomain, tuple(mapping[e] for e in domain.edges))

    @property
    def edge_map(self) -> dict:
        return dict(zip(self.domain.edges, self.images))

    def __call__(self, e: Edge) -> Edge:
        return self.images[self.domain.edges.index(e)]

    def vertex_image(self, v: Edge) -> FreeOperation | None:
        m = self.edge_map
        ins = [m[e] for e in self.domain.inputs(v)]
        if len(set(ins)) != len(ins):
            return None
        return operation_exists(self.codomain, m[v], ins)


def validate_morphism(m: OmegaMorphism) -> bool:
    if len(m.images) != len(m.domain.edges):
        return False
    if any(e not in m.codomain.edges for e in m.images):
        return False
    return all(m.vertex_image(v) is not None for v in m.domain.vertices)


def _checked(m: OmegaMorphism) -> OmegaMorphism:
    if not validate_morphism(m):
        raise MorphismError(f"invalid edge map {m.edge_map!r}")
    return m


def identity(T: Tree) -> OmegaMorphism:
    return OmegaMorphism(T, T, T.edges)


def compose(g: OmegaMorphism, f: OmegaMorphism) -> OmegaMorphism:
    """``g`` after ``f``."""
    if f.codomain != g.domain:
        raise MorphismError("codomain of f differs from domain of g")
    gm = g.edge_map
    return _checked(OmegaMorphism(f.domain, g.codomain, tuple(gm[e] for e in f.images)))


def is_mono(m: OmegaMorphism) -> bool:
    return len(set(m.images)) == len(m.images)


def is_iso(m: OmegaMorphism) -> bool:
    if not is_mono(m) or set(m.images) != set(m.codomain.edges):
        return False
    inv = {b: a for a, b in m.edge_map.items()}
    return validate_morphism(OmegaMorphism.from_map(m.codomain, m.domain, inv))


# faces ---------------------------------------------------------------------

INNER, LEAF, ROOT, COROLLA_EDGE, COMPOSITE, IDENTITY = (
    "inner", "leaf", "root", "corolla-edge", "composite", "identity")


@dataclass(frozen=True)
class FaceMono:
    """A face of ``codomain``.  Face domains keep the codomain's labels,
    so the edge map is an inclusion and the domain is the image."""

    domain: Tree
    codomain: Tree
    kind: str = COMPOSITE
    label: object = field(default=None, compare=False)

    @property
    def morphism(self) -> OmegaMorphism:
        return OmegaMorphism(self.domain, self.codomain, self.domain.edges)

    @property
    def key(self) -> tuple:
        """Image of the face: its edges and the edges that carry vertices."""
        return face_key(self.domain)

    def then(self, outer: FaceMono) -> FaceMono:
        """Compose with a face of our codomain."""
        if outer.domain != self.codomain:
            raise MorphismError("faces not composable")
        return FaceMono(self.domain, outer.codomain, COMPOSITE)


def face_key(t: Tree) -> tuple:
    return (frozenset(t.edges), frozenset(t.vertices))


def _is_corolla(T: Tree) -> bool:
    return len(T.vertices) == 1


def inner_face(T: Tree, e: Edge) -> FaceMono:
    if e not in T.inner_edges:
        raise MorphismError(f"{e!r} is not an inner edge")
    ins = T.input_map()
    lower = T.parent(e)
    upper = ins.pop(e)
    ins[lower] = [x for x in ins[lower] if x != e] + list(upper)
    return FaceMono(Tree(T.root, ins), T, INNER, e)


def leaf_face(T: Tree, v: Edge) -> FaceMono:
    if v not in T.leaf_vertices():
        raise MorphismError(f"{v!r} is not a leaf vertex")
    if _is_corolla(T):
        return corolla_edge_face(T, T.root)
    ins = T.input_map()
    ins.pop(v)
    return FaceMono(Tree(T.root, ins), T, LEAF, v)


def root_face(T: Tree) -> FaceMono:
    if T.is_eta:
        raise MorphismError("eta has no root face")
    inner = [e for e in T.inputs(T.root) if T.is_vertex(e)]
    if len(inner) != 1:
        raise MorphismError(f"root vertex has {len(inner)} inner inputs, need exactly 1")
    return FaceMono(T.subtree(inner[0]), T, ROOT, T.root)


def has_root_face(T: Tree) -> bool:
    return (not T.is_eta and not _is_corolla(T)
            and sum(T.is_vertex(e) for e in T.inputs(T.root)) == 1)


def corolla_edge_face(T: Tree, e: Edge) -> FaceMono:
    if not _is_corolla(T):
        raise MorphismError("not a corolla")
    if e not in T.edges:
        raise MorphismError(f"unknown edge {e!r}")
    return FaceMono(Tree(e), T, COROLLA_EDGE, e)


def elementary_faces(T: Tree) -> list[FaceMono]:
    """All elementary faces; corollas use the edge-inclusion convention."""
    if T.is_eta:
        return []
    if _is_corolla(T):
        return [corolla_edge_face(T, e) for e in T.edges]
    faces = [inner_face(T, e) for e in T.inner_edges]
    faces += [leaf_face(T, v) for v in T.leaf_vertices()]
    if has_root_face(T):
        faces.append(root_face(T))
    return faces


# degeneracies ---------------------------------------------------------------


def degeneracy(T: Tree, e: Edge) -> OmegaMorphism:
    """The map from ``T`` with ``e`` subdivided onto ``T``."""
    if e not in T.edges:
        raise TreeError(f"unknown edge {e!r}")
    ins = {(0, v): [(0, x) for x in es] for v, es in T.input_map().items()}
    # (0, e) is the lower half and carries the new vertex; (1, e) the upper
    if (0, e) in ins:
        ins[(1, e)] = ins.pop((0, e))
    ins[(0, e)] = [(1, e)]
    tagged = Tree((0, T.root), ins)
    paths = path_labels(tagged)
    domain = to_paths(tagged)
    back = {paths[t]: t[1] for t in tagged.edges}
    return _checked(OmegaMorphism.from_map(domain, T, back))


# hom-sets -------------------------------------------------------------------


def hom_set(T: Tree, S: Tree) -> list[OmegaMorphism]:
    ops = operations_by_output(S)
    order = []
    stack = [T.root]
    while stack:
        v = stack.pop()
        if T.is_vertex(v):
            order.append(v)
            stack.extend(T.inputs(v))
    found = []

    def rec(i, assign):
        if i == len(order):
            found.append(OmegaMorphism.from_map(T, S, assign))
            return
        v = order[i]
        kids = T.inputs(v)
        for op in ops[assign[v]]:
            if len(op.inputs) != len(kids):
                continue
            for perm in itertools.permutations(sorted(op.inputs)):
                nxt = dict(assign)
                nxt.update(zip(kids, perm))
                rec(i + 1, nxt)

    for r in S.edges:
        rec(0, {T.root: r})
    found.sort(key=lambda m: m.images)
    return found


def brute_force_hom_set(T: Tree, S: Tree) -> list[OmegaMorphism]:
    """All edge maps filtered by validity; the oracle for :func:`hom_set`."""
    out = []
    for imgs in itertools.product(S.edges, repeat=len(T.edges)):
        m = OmegaMorphism(T, S, imgs)
        if validate_morphism(m):
            out.append(m)
    return out
