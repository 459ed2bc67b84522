"""Forests presenting finite pointed sets, and their simplices.

A pointed map <m> -> <n> is stored as a tuple of length m whose entries
lie in 0..n, with 0 standing for the basepoint.  A chain of k such maps is
a k-simplex; its forest has an edge ``(l, x)`` for every non-basepoint
element x of the l-th pointed set.  Edge ``(l, x)`` with l >= 1 is a vertex
whose inputs are the edges ``(l-1, y)`` with ``a_l(y) = x``.  A component
whose root sits below the last level was sent to the basepoint; it is
uprooted and records the level where that happened.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from . import omega
from .omega import FaceMono, OmegaMorphism
from .operads import Operad
from .subcomplexes import PresheafMap, Subcomplex, extend
from .trees import Tree, relabel

BASE = 0


class ForestError(ValueError):
    pass


# pointed maps ----------------------------------------------------------------


@dataclass(frozen=True)
class PointedMap:
    m: int
    n: int
    values: tuple  # values[i-1] is the image of i, 0 is the basepoint

    def __post_init__(self):
        if len(self.values) != self.m:
            raise ForestError(f"map has {len(self.values)} values, expected {self.m}")
        if any(not 0 <= v <= self.n for v in self.values):
            raise ForestError(f"values out of range 0..{self.n}: {self.values}")

    def __call__(self, i: int) -> int:
        return BASE if i == BASE else self.values[i - 1]

    def preimage(self, j: int) -> tuple:
        return tuple(i for i in range(1, self.m + 1) if self(i) == j)

    def then(self, other: PointedMap) -> PointedMap:
        """``other`` after ``self``."""
        if self.n != other.m:
            raise ForestError(f"cannot compose <{self.m}>-><{self.n}> with <{other.m}>-><{other.n}>")
        return PointedMap(self.m, other.n, tuple(other(v) for v in self.values))

    def __str__(self) -> str:
        return ",".join(f"{i}->{'*' if v == BASE else v}" for i, v in enumerate(self.values, 1))


def identity_map(n: int) -> PointedMap:
    return PointedMap(n, n, tuple(range(1, n + 1)))


def all_pointed_maps(m: int, n: int):
    for values in itertools.product(range(n + 1), repeat=m):
        yield PointedMap(m, n, values)


# arrows as forests -----------------------------------------------------------


@dataclass(frozen=True)
class ForestArrow:
    """One corolla per target element (in target order) and one uprooted
    eta per element sent to the basepoint.  Corolla j has root ``(1, j)``;
    leaves and etas carry labels ``(0, i)`` and ``input_labels`` maps each
    source element to its edge."""

    m: int
    n: int
    corollas: tuple
    uprooted: tuple
    input_labels: tuple  # input_labels[i-1] is the edge of source element i

    def __post_init__(self):
        if len(self.corollas) != self.n:
            raise ForestError("need one corolla per target element")
        if any(len(c.vertices) != 1 for c in self.corollas) or any(not t.is_eta for t in self.uprooted):
            raise ForestError("arrow forests consist of corollas and etas")
        leaves = [e for c in self.corollas for e in c.inputs(c.root)]
        etas = [t.root for t in self.uprooted]
        if sorted(self.input_labels) != sorted(leaves + etas) or len(set(self.input_labels)) != self.m:
            raise ForestError("input labels must biject onto the leaves and etas")


def arrow_from_map(alpha: PointedMap) -> ForestArrow:
    label = {i: (0, i) for i in range(1, alpha.m + 1)}
    corollas = tuple(Tree((1, j), {(1, j): [label[i] for i in alpha.preimage(j)]})
                     for j in range(1, alpha.n + 1))
    uprooted = tuple(Tree(label[i]) for i in alpha.preimage(BASE))
    return ForestArrow(alpha.m, alpha.n, corollas, uprooted, tuple(label[i] for i in range(1, alpha.m + 1)))


def map_from_arrow(F: ForestArrow) -> PointedMap:
    where = {}
    for j, c in enumerate(F.corollas, 1):
        for e in c.leaves:
            where[e] = j
    for t in F.uprooted:
        where[t.root] = BASE
    return PointedMap(F.m, F.n, tuple(where[e] for e in F.input_labels))


def compose_arrows(F2: ForestArrow, F1: ForestArrow) -> ForestArrow:
    """``F2`` after ``F1``: graft corolla i of ``F1`` onto the leaf of ``F2``
    labelled i, then contract the grafted edges."""
    if F1.n != F2.m:
        raise ForestError(f"cannot compose arrows of sizes {F1.m}->{F1.n} and {F2.m}->{F2.n}")
    source_of = {e: i for i, e in enumerate(F2.input_labels, 1)}
    above = {i: c.inputs(c.root) for i, c in enumerate(F1.corollas, 1)}
    corollas = []
    for c in F2.corollas:
        # contracting each grafted edge leaves the upper corolla's leaves
        leaves = [x for e in c.inputs(c.root) for x in above[source_of[e]]]
        corollas.append(Tree.corolla_on(c.root, leaves))
    uprooted = list(F1.uprooted)
    for t in F2.uprooted:
        # a corolla grafted onto an uprooted eta falls apart into etas
        uprooted.extend(Tree(x) for x in above[source_of[t.root]])
    uprooted.sort(key=lambda t: t.root)
    return ForestArrow(F1.m, F2.n, tuple(corollas), tuple(uprooted), F1.input_labels)


# chains ----------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    sizes: tuple
    maps: tuple

    def __post_init__(self):
        if len(self.sizes) != len(self.maps) + 1:
            raise ForestError("a chain of k maps has k+1 objects")
        for l, a in enumerate(self.maps):
            if (a.m, a.n) != (self.sizes[l], self.sizes[l + 1]):
                raise ForestError(f"map {l + 1} is not <{self.sizes[l]}> -> <{self.sizes[l + 1]}>")

    @classmethod
    def of(cls, *maps: PointedMap, size: int | None = None) -> Chain:
        if not maps:
            if size is None:
                raise ForestError("an empty chain needs its object size")
            return cls((size,), ())
        return cls((maps[0].m,) + tuple(a.n for a in maps), tuple(maps))

    @property
    def k(self) -> int:
        return len(self.maps)

    def __str__(self) -> str:
        head = ">".join(map(str, self.sizes))
        return head + ": " + " | ".join(str(a) for a in self.maps) if self.maps else head


def compose_range(c: Chain, i: int, j: int) -> PointedMap:
    """The composite map from object ``i`` to object ``j``."""
    a = identity_map(c.sizes[i])
    for l in range(i, j):
        a = a.then(c.maps[l])
    return a


def simplicial_face(i: int, c: Chain) -> Chain:
    """Drop object ``i``; inner objects are dropped by composing."""
    k = c.k
    if not 0 <= i <= k or k == 0:
        raise ForestError(f"face index {i} out of range for a {k}-simplex")
    maps = list(c.maps)
    if i == 0:
        maps = maps[1:]
    elif i == k:
        maps = maps[:-1]
    else:
        maps[i - 1:i + 1] = [maps[i - 1].then(maps[i])]
    sizes = c.sizes[:i] + c.sizes[i + 1:]
    return Chain(sizes, tuple(maps))


def simplicial_degeneracy(i: int, c: Chain) -> Chain:
    """Repeat object ``i`` with an identity between the copies."""
    if not 0 <= i <= c.k:
        raise ForestError(f"degeneracy index {i} out of range for a {c.k}-simplex")
    maps = list(c.maps)
    maps.insert(i, identity_map(c.sizes[i]))
    return Chain(c.sizes[:i + 1] + c.sizes[i:], tuple(maps))


def face_level_map(k: int, i: int):
    """Levels of the i-th face of a k-simplex into levels of the simplex."""
    return lambda l: l if l < i else l + 1


def degeneracy_level_map(k: int, i: int):
    """Levels of the i-th degeneracy of a k-simplex onto levels of the simplex."""
    return lambda l: l if l <= i else l - 1


def all_chains(k: int, max_size: int, max_total: int | None = None):
    """Every chain of ``k`` maps with object sizes in 0..max_size."""
    for sizes in itertools.product(range(max_size + 1), repeat=k + 1):
        if max_total is not None and sum(sizes) > max_total:
            continue
        pools = [list(all_pointed_maps(sizes[l], sizes[l + 1])) for l in range(k)]
        for maps in itertools.product(*pools):
            yield Chain(tuple(sizes), tuple(maps))


_SIZES = re.compile(r"^\s*\d+(\s*>\s*\d+)*\s*$")
_PAIR = re.compile(r"^\s*(\d+)\s*->\s*(\d+|\*)\s*$")


def parse_chain(text: str) -> Chain:
    """Parse ``"5>4>3>1: 1->1,2->1,... | 1->*,... | ..."``.

    Maps are separated by ``|``; ``*`` is the basepoint; every element
    of each source must be listed exactly once.
    """
    head, _, body = text.partition(":")
    if not _SIZES.match(head):
        raise ForestError(f"bad sizes {head.strip()!r}, expected e.g. '5>4>3>1'")
    sizes = tuple(int(s) for s in head.split(">"))
    # a map out of <0> prints as nothing, so blank parts are allowed
    parts = body.split("|") if len(sizes) > 1 or body.strip() else []
    if len(parts) != len(sizes) - 1:
        raise ForestError(f"{len(sizes)} objects need {len(sizes) - 1} maps, got {len(parts)}")
    maps = []
    for l, part in enumerate(parts):
        m, n = sizes[l], sizes[l + 1]
        values: dict = {}
        entries = [p for p in part.split(",") if p.strip()]
        for entry in entries:
            hit = _PAIR.match(entry)
            if not hit:
                raise ForestError(f"map {l + 1}: cannot read {entry.strip()!r}, expected 'i->j'")
            i = int(hit.group(1))
            j = BASE if hit.group(2) == "*" else int(hit.group(2))
            if not 1 <= i <= m or not 0 <= j <= n:
                raise ForestError(f"map {l + 1}: {entry.strip()!r} out of range for <{m}> -> <{n}>")
            if i in values:
                raise ForestError(f"map {l + 1}: {i} assigned twice")
            values[i] = j
        if len(values) != m:
            missing = sorted(set(range(1, m + 1)) - set(values))
            raise ForestError(f"map {l + 1}: no value for {missing}")
        maps.append(PointedMap(m, n, tuple(values[i] for i in range(1, m + 1))))
    return Chain(sizes, tuple(maps))


# forest simplices ------------------------------------------------------------


@dataclass(frozen=True)
class ForestSimplex:
    """The layered forest of a chain; ``death_level[c]`` is 0 for a component
    that reaches the last level and otherwise the level whose map sends its
    root to the basepoint."""

    k: int
    sizes: tuple
    components: tuple
    death_level: tuple

    def level(self, e) -> int:
        return e[0]

    def edges(self):
        return [e for t in self.components for e in t.edges]

    def input_labels(self) -> dict:
        return {e: e[1] for e in self.edges() if e[0] == 0}

    def component_of(self, e) -> int:
        for c, t in enumerate(self.components):
            if e in t.edges:
                return c
        raise ForestError(f"no edge {e!r}")


def is_uprooted(F: ForestSimplex, c: int) -> bool:
    return F.death_level[c] > 0


def _component_key(t: Tree):
    return min(t.edges)


def chain_to_forest(c: Chain) -> ForestSimplex:
    k = c.k
    inputs = {}
    for l in range(1, k + 1):
        a = c.maps[l - 1]
        for x in range(1, c.sizes[l] + 1):
            inputs[(l, x)] = [(l - 1, y) for y in a.preimage(x)]
    roots = [(k, x) for x in range(1, c.sizes[k] + 1)]
    deaths = {(k, x): 0 for x in range(1, c.sizes[k] + 1)}
    for l in range(k):
        for y in c.maps[l].preimage(BASE):
            roots.append((l, y))
            deaths[(l, y)] = l + 1
    comps = []
    for r in roots:
        keep = {}
        stack = [r]
        while stack:
            v = stack.pop()
            if v in inputs:
                keep[v] = inputs[v]
                stack.extend(inputs[v])
        comps.append((Tree(r, keep), deaths[r]))
    comps.sort(key=lambda ct: _component_key(ct[0]))
    return ForestSimplex(k, c.sizes, tuple(t for t, _ in comps), tuple(d for _, d in comps))


def forest_to_chain(F: ForestSimplex) -> Chain:
    values = [dict() for _ in range(F.k)]
    for t, death in zip(F.components, F.death_level):
        for v in t.vertices:
            l, x = v
            for (l0, y) in t.inputs(v):
                if l0 != l - 1:
                    raise ForestError(f"vertex {v!r} does not join consecutive levels")
                values[l - 1][y] = x
        r = t.root
        if death:
            if r[0] != death - 1:
                raise ForestError(f"component rooted at {r!r} cannot die at level {death}")
            values[r[0]][r[1]] = BASE
        elif r[0] != F.k:
            raise ForestError(f"component rooted at {r!r} neither reaches level {F.k} nor dies")
    maps = []
    for l in range(F.k):
        m, n = F.sizes[l], F.sizes[l + 1]
        if sorted(values[l]) != list(range(1, m + 1)):
            raise ForestError(f"level {l} edges do not match size {m}")
        maps.append(PointedMap(m, n, tuple(values[l][i] for i in range(1, m + 1))))
    return Chain(F.sizes, tuple(maps))


def component_simplex(F: ForestSimplex, c: int) -> ForestSimplex:
    """Component ``c`` as a forest of its own, relabelled so that each
    level is numbered 1, 2, ... in the original order."""
    t = F.components[c]
    sizes = [0] * (F.k + 1)
    mapping = {}
    for l, x in sorted(t.edges):
        sizes[l] += 1
        mapping[(l, x)] = (l, sizes[l])
    return ForestSimplex(F.k, tuple(sizes), (relabel(t, mapping),), (F.death_level[c],))


def layered_code(t: Tree, death: int) -> str:
    """Canonical code of a component that also records levels and the
    level at which it was uprooted (0 if never)."""

    def code(e):
        if not t.is_vertex(e):
            return f"{e[0]}|"
        return f"{e[0]}(" + "".join(sorted(code(x) for x in t.inputs(e))) + ")"

    return f"{death}:{code(t.root)}"


def distinct_components(k: int, max_edges: int) -> list[ForestSimplex]:
    """One standalone simplex per isomorphism class of component occurring
    in a k-simplex with at most ``max_edges`` edges in total."""
    seen: dict = {}
    for c in all_chains(k, max_edges, max_edges):
        F = chain_to_forest(c)
        for n, (t, d) in enumerate(zip(F.components, F.death_level)):
            key = layered_code(t, d)
            if key not in seen:
                seen[key] = component_simplex(F, n)
    return [seen[key] for key in sorted(seen)]


# faces and degeneracies on forests ----------------------------------------------


@dataclass(frozen=True)
class ComponentMap:
    """A component of a face or degeneracy forest mapped into a component of
    the original forest."""

    source: int
    target: int
    morphism: OmegaMorphism


def _component_maps(small: ForestSimplex, big: ForestSimplex, level) -> tuple:
    where = {e: c for c, t in enumerate(big.components) for e in t.edges}
    out = []
    for s, t in enumerate(small.components):
        images = tuple((level(l), x) for l, x in t.edges)
        target = where[images[0]]
        m = OmegaMorphism(t, big.components[target], images)
        if not omega.validate_morphism(m):
            raise ForestError(f"component {s} does not map into component {target}")
        out.append(ComponentMap(s, target, m))
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def face_inclusion(i: int, F: ForestSimplex) -> tuple:
    """The i-th face forest with each component sent into ``F`` by the
    level map that skips level i."""
    face = chain_to_forest(simplicial_face(i, forest_to_chain(F)))
    return face, _component_maps(face, F, face_level_map(F.k, i))


def face_monos(i: int, F: ForestSimplex) -> list[tuple[int, FaceMono]]:
    """Face images per target component, as faces keeping ``F``'s labels."""
    _, maps = face_inclusion(i, F)
    out = []
    for cm in maps:
        m = cm.morphism
        image = relabel(m.domain, m.edge_map)
        out.append((cm.target, FaceMono(image, m.codomain, omega.COMPOSITE, i)))
    return out


@lru_cache(maxsize=1 << 16)
def degeneracy_maps(i: int, F: ForestSimplex) -> tuple:
    deg = chain_to_forest(simplicial_degeneracy(i, forest_to_chain(F)))
    return deg, _component_maps(deg, F, degeneracy_level_map(F.k, i))


def _union_of_faces(F: ForestSimplex, indices) -> list[Subcomplex]:
    images: list[list[Tree]] = [[] for _ in F.components]
    for i in indices:
        for c, mono in face_monos(i, F):
            images[c].append(mono.domain)
    return [Subcomplex.generated(t, ims) for t, ims in zip(F.components, images)]


def rl_subcomplex(F: ForestSimplex) -> list[Subcomplex]:
    """Per component, the union of the first and last faces."""
    if F.k < 2:
        raise ForestError("the first-and-last face union needs k >= 2")
    return _union_of_faces(F, [0, F.k])


def horn_subcomplex(j: int, F: ForestSimplex) -> list[Subcomplex]:
    """Per component, the union of every face except the j-th."""
    if not 0 <= j <= F.k:
        raise ForestError(f"horn index {j} out of range for k = {F.k}")
    return _union_of_faces(F, [i for i in range(F.k + 1) if i != j])


# lifting against nerves --------------------------------------------------------


def forest_extend(P: Operad, F: ForestSimplex, A: list[Subcomplex],
                  f: list[PresheafMap]) -> list[tuple]:
    """Extensions of a componentwise map ``A -> NP`` to all of ``F``: the
    product of the componentwise extensions."""
    if len(A) != len(F.components) or len(f) != len(F.components):
        raise ForestError("need one subcomplex and one map per component")
    per = [extend(P, a, Subcomplex.full(t), g) for t, a, g in zip(F.components, A, f)]
    return list(itertools.product(*per))


# rendering -------------------------------------------------------------------


def _label(x) -> str:
    return str(x)


def render_ascii(F: ForestSimplex) -> str:
    """One column per component and one row per level, leaves on top.

    ``x:a,b`` is the edge x with a vertex whose inputs are a and b on the
    level above; a bare ``x`` is a leaf; ``×`` marks where an uprooted
    component was sent to the basepoint.
    """
    cols = []
    for t, death in zip(F.components, F.death_level):
        col = []
        for l in range(F.k + 1):
            cells = []
            for e in t.edges:
                if e[0] != l:
                    continue
                if t.is_vertex(e):
                    cells.append(f"{e[1]}:" + ",".join(_label(x[1]) for x in t.inputs(e)))
                else:
                    cells.append(_label(e[1]))
            if death and l == death:
                cells.append("×")
            col.append(" ".join(cells))
        cols.append(col)
    names = [f"T{c + 1}" + ("×" if d else "") for c, d in enumerate(F.death_level)]
    widths = [max([len(n)] + [len(s) for s in col]) for n, col in zip(names, cols)]
    lines = ["     " + "  ".join(n.ljust(w) for n, w in zip(names, widths))]
    for l in range(F.k + 1):
        row = "  ".join(col[l].ljust(w) for col, w in zip(cols, widths))
        lines.append(f"L{l:<3} " + row)
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_dot(F: ForestSimplex, name: str = "forest") -> str:
    """Graphviz source: a node per edge, arrows from inputs to outputs."""

    def node(e):
        return f'"{e[0]}:{e[1]}"'

    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for c, (t, death) in enumerate(zip(F.components, F.death_level)):
        lines.append(f"  subgraph cluster_{c + 1} {{")
        lines.append(f'    label="T{c + 1}";')
        for e in t.edges:
            lines.append(f'    {node(e)} [label="{e[1]}@{e[0]}"];')
        for v in t.vertices:
            for x in t.inputs(v):
                lines.append(f"    {node(x)} -> {node(v)};")
        if death:
            lines.append(f'    "x{c + 1}" [label="×", shape=plaintext];')
            lines.append(f'    {node(t.root)} -> "x{c + 1}";')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
