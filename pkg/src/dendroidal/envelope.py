"""Decorated forests and the symmetric monoidal envelope of an operad nerve.

A decorated object is a tuple of part sizes ``(k_1, ..., k_n)``; its edges
are numbered 1..sum(k) part by part, which is the canonical input order.
A decorated arrow is a pointed map ``beta`` on parts together with a pointed
map ``alpha`` on edges (equivalently a forest of corollas and etas) such
that every edge of part j lands in part ``beta(j)``, or at the basepoint
when ``beta(j)`` is.  Simplices of the envelope are chains of such arrows
together with one dendrex per component of the layered forest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .forests import (BASE, Chain, ForestArrow, ForestSimplex, PointedMap,
                      all_pointed_maps, arrow_from_map, chain_to_forest,
                      compose_arrows, degeneracy_maps, face_inclusion,
                      identity_map, layered_code, map_from_arrow, simplicial_degeneracy,
                      simplicial_face)
from .omega import OmegaMorphism, face_key
from .operads import Dendrex, Operad, argsort, nerve_dendrices, relabel_dendrex, restrict
from .subcomplexes import PresheafMap, Subcomplex, extend, is_compatible_family
from .trees import Tree, relabel


class EnvError(ValueError):
    pass


def _memo_hash(obj, key) -> int:
    # simplices are hashed over and over by the caches below
    h = obj.__dict__.get("_hash")
    if h is None:
        h = hash(key)
        object.__setattr__(obj, "_hash", h)
    return h


# decorated objects and arrows ---------------------------------------------------


@dataclass(frozen=True)
class DecObject:
    sizes: tuple

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def offset(self, i: int) -> int:
        """Number of edges before part ``i`` (1-based)."""
        return sum(self.sizes[:i - 1])

    def edges_of(self, i: int) -> range:
        start = self.offset(i)
        return range(start + 1, start + self.sizes[i - 1] + 1)

    def part_of(self, e: int) -> int:
        table = _part_table(self.sizes)
        if not 0 <= e < len(table):
            raise EnvError(f"edge {e} not in {self.sizes}")
        return table[e]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.sizes)) + ")"


@lru_cache(maxsize=None)
def _part_table(sizes: tuple) -> tuple:
    return (BASE,) + tuple(i for i, k in enumerate(sizes, 1) for _ in range(k))


@dataclass(frozen=True)
class DecArrow:
    source: DecObject
    target: DecObject
    beta: PointedMap
    forest: ForestArrow

    @property
    def alpha(self) -> PointedMap:
        return map_from_arrow(self.forest)


def dec_arrow(source: DecObject, target: DecObject, beta: PointedMap, alpha: PointedMap) -> DecArrow:
    return DecArrow(source, target, beta, arrow_from_map(alpha))


def dec_identity(obj: DecObject) -> DecArrow:
    return dec_arrow(obj, obj, identity_map(obj.n), identity_map(obj.total))


def validate_dec_arrow(a: DecArrow) -> bool:
    """Check that roots are partitioned by the target, the remaining edges by
    the source, and that the leaves over part i of the target are exactly
    the parts of the source that ``beta`` sends to i."""
    F, L, M = a.forest, a.source, a.target
    if (a.beta.m, a.beta.n) != (L.n, M.n) or (F.m, F.n) != (L.total, M.total):
        return False
    element = {e: x for x, e in enumerate(F.input_labels, 1)}
    for i in range(1, M.n + 1):
        over = {element[e] for j in M.edges_of(i) for e in F.corollas[j - 1].leaves}
        want = {x for j in a.beta.preimage(i) for x in L.edges_of(j)}
        if over != want:
            return False
    return True


def compose_dec(a2: DecArrow, a1: DecArrow) -> DecArrow:
    """``a2`` after ``a1``."""
    if a1.target != a2.source:
        raise EnvError(f"target {a1.target} differs from source {a2.source}")
    return DecArrow(a1.source, a2.target, a1.beta.then(a2.beta), compose_arrows(a2.forest, a1.forest))


def _compatible(src: DecObject, dst: DecObject, beta: PointedMap, alpha: PointedMap) -> bool:
    return all(dst.part_of(alpha(e)) == beta(src.part_of(e)) for e in range(1, src.total + 1))


def dec_arrows(src: DecObject, dst: DecObject, beta: PointedMap | None = None):
    """Every decorated arrow ``src -> dst`` as ``(beta, alpha)`` pairs."""
    betas = [beta] if beta is not None else all_pointed_maps(src.n, dst.n)
    for b in betas:
        pools = []
        for j in range(1, src.n + 1):
            i = b(j)
            targets = [BASE] if i == BASE else list(dst.edges_of(i))
            pools.extend([targets] * src.sizes[j - 1])
        for values in itertools.product(*pools):
            yield b, PointedMap(src.total, dst.total, values)


# decorated chains ----------------------------------------------------------------


@dataclass(frozen=True)
class DecChain:
    objects: tuple
    betas: tuple
    alphas: tuple

    def __post_init__(self):
        if not self.objects or len(self.betas) != len(self.objects) - 1 or len(self.alphas) != len(self.betas):
            raise EnvError("a chain of k arrows needs k+1 objects")
        for l, (b, a) in enumerate(zip(self.betas, self.alphas)):
            src, dst = self.objects[l], self.objects[l + 1]
            if (b.m, b.n, a.m, a.n) != (src.n, dst.n, src.total, dst.total) or not _compatible(src, dst, b, a):
                raise EnvError(f"arrow {l + 1} does not respect the partitions")

    def __hash__(self):
        return _memo_hash(self, (self.objects, self.betas, self.alphas))

    @property
    def k(self) -> int:
        return len(self.betas)

    def arrows(self) -> list[DecArrow]:
        return [dec_arrow(self.objects[l], self.objects[l + 1], b, a)
                for l, (b, a) in enumerate(zip(self.betas, self.alphas))]

    def edge_chain(self) -> Chain:
        c = self.__dict__.get("_edges")
        if c is None:
            c = Chain(tuple(o.total for o in self.objects), self.alphas)
            object.__setattr__(self, "_edges", c)
        return c

    @property
    def forest(self) -> ForestSimplex:
        return _forest(self.edge_chain())

    def part_of(self, e) -> int:
        """Part index of the forest edge ``(l, x)``."""
        return self.objects[e[0]].part_of(e[1])

    def __str__(self) -> str:
        head = ">".join(str(o) for o in self.objects)
        body = " | ".join(f"{b} / {a}" for b, a in zip(self.betas, self.alphas))
        return f"{head}: {body}" if body else head


@lru_cache(maxsize=1 << 16)
def _forest(c: Chain) -> ForestSimplex:
    return chain_to_forest(c)


def dec_chain(objects, arrows: list[DecArrow] | None = None) -> DecChain:
    arrows = arrows or []
    return DecChain(tuple(objects), tuple(a.beta for a in arrows), tuple(a.alpha for a in arrows))


def part(c: DecChain) -> Chain:
    """The underlying chain of pointed maps on parts."""
    p = c.__dict__.get("_parts")
    if p is None:
        p = Chain(tuple(o.n for o in c.objects), c.betas)
        object.__setattr__(c, "_parts", p)
    return p


def _trusted(objects, betas, alphas) -> DecChain:
    # faces and degeneracies of a valid chain are valid; skip the checks
    c = object.__new__(DecChain)
    object.__setattr__(c, "objects", objects)
    object.__setattr__(c, "betas", betas)
    object.__setattr__(c, "alphas", alphas)
    return c


def dec_face(i: int, c: DecChain) -> DecChain:
    parts = simplicial_face(i, part(c))
    edges = simplicial_face(i, c.edge_chain())
    return _trusted(c.objects[:i] + c.objects[i + 1:], parts.maps, edges.maps)


def dec_degeneracy(i: int, c: DecChain) -> DecChain:
    parts = simplicial_degeneracy(i, part(c))
    edges = simplicial_degeneracy(i, c.edge_chain())
    return _trusted(c.objects[:i + 1] + c.objects[i:], parts.maps, edges.maps)


# bounds and enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    """Truncation of the envelope: edges per level (the length of each
    colour tuple), parts per level, and edges in the whole forest."""

    max_len: int = 2
    max_parts: int = 2
    max_edges: int | None = None

    def __post_init__(self):
        if self.max_len < 0 or self.max_parts < 0 or (self.max_edges is not None and self.max_edges < 0):
            raise EnvError("bounds must be non-negative")


def dec_objects(bounds: Bounds, parts: int | None = None) -> list[DecObject]:
    """Objects with at most ``max_parts`` parts (exactly ``parts`` if given)."""
    counts = [parts] if parts is not None else range(bounds.max_parts + 1)
    out = []
    for n in counts:
        for sizes in itertools.product(range(bounds.max_len + 1), repeat=n):
            if sum(sizes) <= bounds.max_len:
                out.append(DecObject(sizes))
    return out


def dec_chains(k: int, bounds: Bounds, base: Chain | None = None):
    """Decorated k-chains within bounds, optionally lying over ``base``."""
    if base is not None and base.k != k:
        raise EnvError(f"base chain has {base.k} maps, expected {k}")
    limit = bounds.max_edges

    def objects_at(l):
        return dec_objects(bounds, base.sizes[l] if base is not None else None)

    def rec(l, objs, betas, alphas, used):
        if l == k:
            yield DecChain(tuple(objs), tuple(betas), tuple(alphas))
            return
        for nxt in objects_at(l + 1):
            if limit is not None and used + nxt.total > limit:
                continue
            beta = base.maps[l] if base is not None else None
            for b, a in dec_arrows(objs[-1], nxt, beta):
                yield from rec(l + 1, objs + [nxt], betas + [b], alphas + [a], used + nxt.total)

    for first in objects_at(0):
        if limit is None or first.total <= limit:
            yield from rec(0, [first], [], [], first.total)


@lru_cache(maxsize=1 << 16)
def _dendrices(P: Operad, t: Tree) -> tuple:
    return tuple(nerve_dendrices(P, t))


@dataclass(frozen=True)
class EnvSimplex:
    """A decorated chain and one dendrex per component of its forest."""

    chain: DecChain
    dendrices: tuple
    operad: Operad = field(default=None, compare=False, repr=False)

    def __hash__(self):
        return _memo_hash(self, (self.chain, self.dendrices))

    @property
    def k(self) -> int:
        return self.chain.k

    @property
    def forest(self) -> ForestSimplex:
        return self.chain.forest

    def colours(self, level: int) -> tuple:
        """The colour tuple sitting at one level."""
        return self.levels()[level]

    def levels(self) -> tuple:
        """Colour tuples of all levels."""
        found = {}
        for x in self.dendrices:
            found.update(zip(x.tree.edges, x.colours))
        return tuple(tuple(found[(l, i)] for i in range(1, o.total + 1))
                     for l, o in enumerate(self.chain.objects))


def env_simplices(P: Operad, k: int, bounds: Bounds, base: Chain | None = None) -> list[EnvSimplex]:
    out = []
    for c in dec_chains(k, bounds, base):
        pools = [_dendrices(P, t) for t in c.forest.components]
        for xs in itertools.product(*pools):
            out.append(EnvSimplex(c, xs, P))
    return out


def degenerate_base(n: int, k: int) -> Chain:
    """The constant chain at <n>."""
    return Chain((n,) * (k + 1), (identity_map(n),) * k)


def projection(s: EnvSimplex) -> Chain:
    """The structure map to the nerve of finite pointed sets."""
    return part(s.chain)


# faces and degeneracies ----------------------------------------------------------


def env_face(i: int, s: EnvSimplex) -> EnvSimplex:
    """Face of the decorated chain, with each dendrex restricted along the
    component maps of the face forest."""
    return _env_face(s.operad, i, s)


@lru_cache(maxsize=1 << 18)
def _env_face(P: Operad, i: int, s: EnvSimplex) -> EnvSimplex:
    _, maps = face_inclusion(i, s.forest)
    xs = tuple(restrict(P, s.dendrices[cm.target], cm.morphism) for cm in maps)
    return EnvSimplex(dec_face(i, s.chain), xs, P)


def env_degeneracy(i: int, s: EnvSimplex) -> EnvSimplex:
    return _env_degeneracy(s.operad, i, s)


@lru_cache(maxsize=1 << 18)
def _env_degeneracy(P: Operad, i: int, s: EnvSimplex) -> EnvSimplex:
    _, maps = degeneracy_maps(i, s.forest)
    xs = tuple(restrict(P, s.dendrices[cm.target], cm.morphism) for cm in maps)
    return EnvSimplex(dec_degeneracy(i, s.chain), xs, P)


# filling ---------------------------------------------------------------------------


def glue(P: Operad, chain: DecChain, faces: dict) -> list[EnvSimplex]:
    """Every simplex over ``chain`` whose i-th face is ``faces[i]``.

    The face dendrices are carried onto their images in the forest; this
    gives a map from a union of faces into the nerve, which is then
    extended component by component.
    """
    F = chain.forest
    values = [dict() for _ in F.components]
    images = [[] for _ in F.components]
    for i, x in sorted(faces.items()):
        if dec_face(i, chain) != x.chain:
            return []
        _, maps = face_inclusion(i, F)
        for cm, d in zip(maps, x.dendrices):
            em = cm.morphism.edge_map
            image = relabel(cm.morphism.domain, em)
            val = relabel_dendrex(P, d, em)
            key = face_key(image)
            if values[cm.target].setdefault(key, val) != val:
                return []
            if image not in images[cm.target]:
                images[cm.target].append(image)
    per = []
    for c, t in enumerate(F.components):
        A = Subcomplex.generated(t, images[c])
        if not is_compatible_family(P, A, values[c]):
            return []
        f = PresheafMap(A, P, tuple((key, values[c][key]) for key in A.maximal))
        per.append([g.at(face_key(t)) for g in extend(P, A, Subcomplex.full(t), f)])
    return [EnvSimplex(chain, xs, P) for xs in itertools.product(*per)]


def _check_horn(faces: dict):
    for a, b in itertools.combinations(sorted(faces), 2):
        if env_face(a, faces[b]) != env_face(b - 1, faces[a]):
            raise EnvError(f"faces {a} and {b} are incompatible")


def _horn_chain(faces: dict, k: int, missing_arrows=()) -> tuple:
    """Objects and arrows of the chain that a horn determines; arrows listed
    in ``missing_arrows`` are returned as None."""
    objects, arrows = [], []
    for l in range(k + 1):
        i = next(i for i in sorted(faces) if i != l)
        objects.append(faces[i].chain.objects[l if l < i else l - 1])
    for l in range(k):
        holders = [i for i in sorted(faces) if i not in (l, l + 1)]
        if not holders:
            arrows.append(None)
            continue
        i = holders[0]
        c = faces[i].chain
        pos = l if l < i else l - 1
        arrows.append((c.betas[pos], c.alphas[pos]))
    return objects, arrows


def inner_fillers(P: Operad, faces: dict, j: int) -> list[EnvSimplex]:
    """All fillers of an inner horn given as ``{i: face}`` for i != j."""
    k = len(faces)
    if not 0 < j < k or set(faces) != set(range(k + 1)) - {j}:
        raise EnvError(f"need faces {sorted(set(range(k + 1)) - {j})} of an inner horn")
    _check_horn(faces)
    objects, arrows = _horn_chain(faces, k)
    chain = DecChain(tuple(objects), tuple(b for b, _ in arrows), tuple(a for _, a in arrows))
    return glue(P, chain, faces)


def env_inner_filler(P: Operad, faces: dict, j: int) -> EnvSimplex:
    found = inner_fillers(P, faces, j)
    if len(found) != 1:
        raise EnvError(f"inner horn has {len(found)} fillers")
    return found[0]


def horn_of(s: EnvSimplex, j: int) -> dict:
    return {i: env_face(i, s) for i in range(s.k + 1) if i != j}


def horns(P: Operad, k: int, j: int, bounds: Bounds, pool: list[EnvSimplex] | None = None):
    """Every compatible family of faces ``i != j`` of a k-simplex whose
    levels fit ``bounds``.  Faces are joined one at a time using the
    simplicial identities."""
    if k < 2:
        raise EnvError("horns need k >= 2")
    pool = pool if pool is not None else env_simplices(P, k - 1, bounds)
    order = [i for i in range(k + 1) if i != j]
    # for the n-th face, index the pool by the faces it shares with the
    # faces chosen before it: d_a x_b = d_{b-1} x_a for a < b
    index = [None]
    for n in range(1, len(order)):
        earlier = order[:n]
        table: dict = {}
        for x in pool:
            table.setdefault(tuple(env_face(a, x) for a in earlier), []).append(x)
        index.append(table)
    limit = bounds.max_edges

    def rec(n, chosen):
        if n == len(order):
            if limit is not None:
                objects, _ = _horn_chain(chosen, k)
                if sum(o.total for o in objects) > limit:
                    return
            yield dict(chosen)
            return
        b = order[n]
        if n == 0:
            cands = pool
        else:
            cands = index[n].get(tuple(env_face(b - 1, chosen[a]) for a in order[:n]), [])
        for x in cands:
            chosen[b] = x
            yield from rec(n + 1, chosen)
            del chosen[b]

    yield from rec(0, {})


# cocartesian edges -----------------------------------------------------------------


def _degenerate_dendrex(P: Operad, t: Tree, colour) -> Dendrex:
    """The value on a 1-corolla obtained from an eta through the degeneracy
    collapsing the corolla onto its leaf."""
    leaf = t.leaves[0]
    eta = Tree(leaf)
    m = OmegaMorphism(t, eta, tuple(leaf for _ in t.edges))
    return restrict(P, Dendrex(eta, (colour,), ()), m)


def cocartesian_lift(P: Operad, obj: DecObject, colours: tuple, beta: PointedMap) -> EnvSimplex:
    """The edge over ``beta`` that moves part i of ``obj`` onto part beta(i)
    of the target by identities and drops the parts sent to the basepoint."""
    if len(colours) != obj.total or beta.m != obj.n:
        raise EnvError("colours or map do not fit the object")
    sizes = [0] * beta.n
    for i in range(1, obj.n + 1):
        if beta(i) != BASE:
            sizes[beta(i) - 1] += obj.sizes[i - 1]
    target = DecObject(tuple(sizes))
    filled = [0] * beta.n
    values = []
    for i in range(1, obj.n + 1):
        j = beta(i)
        for _ in obj.edges_of(i):
            if j == BASE:
                values.append(BASE)
            else:
                filled[j - 1] += 1
                values.append(target.offset(j) + filled[j - 1])
    chain = DecChain((obj, target), (beta,), (PointedMap(obj.total, target.total, tuple(values)),))
    xs = []
    for t in chain.forest.components:
        if t.is_eta:
            xs.append(Dendrex(t, (colours[t.root[1] - 1],), ()))
        else:
            xs.append(_degenerate_dendrex(P, t, colours[t.leaves[0][1] - 1]))
    return EnvSimplex(chain, tuple(xs), P)


def object_simplex(P: Operad, obj: DecObject, colours: tuple) -> EnvSimplex:
    chain = DecChain((obj,), (), ())
    return EnvSimplex(chain, tuple(Dendrex(t, (colours[t.root[1] - 1],), ()) for t in chain.forest.components), P)


def _relative_fillers(P: Operad, faces: dict, base: Chain, bounds: Bounds) -> list[EnvSimplex]:
    """Fillers over ``base`` of a horn missing face 0.  Arrows that no given
    face remembers are enumerated."""
    k = base.k
    objects, arrows = _horn_chain(faces, k)
    options = []
    for l, arr in enumerate(arrows):
        if arr is not None:
            options.append([arr])
        else:
            options.append(list(dec_arrows(objects[l], objects[l + 1], base.maps[l])))
    found = []
    for combo in itertools.product(*options):
        try:
            chain = DecChain(tuple(objects), tuple(b for b, _ in combo), tuple(a for _, a in combo))
        except EnvError:
            continue
        if part(chain) != base:
            continue
        found.extend(glue(P, chain, faces))
    return found


@dataclass
class CocartesianReport:
    ok: bool
    horns: int
    witness: dict | None = None


def cocartesian_report(edge: EnvSimplex, m_max: int = 3, bounds: Bounds | None = None,
                       pools: dict | None = None) -> CocartesianReport:
    """Fill every horn missing face 0 over finite pointed sets whose first
    edge is ``edge``, for 2 <= m <= m_max, and demand exactly one filler."""
    if edge.k != 1 or m_max not in (2, 3):
        raise EnvError("need an edge and m_max in {2, 3}")
    P = edge.operad
    bounds = bounds or Bounds()
    pools = pools if pools is not None else {}

    if "ones" not in pools:
        ones: dict = {}
        for g in env_simplices(P, 1, bounds):
            ones.setdefault(env_face(1, g), []).append(g)
        pools["ones"] = ones
    if m_max == 3 and "twos" not in pools:
        by_first: dict = {}
        by_long: dict = {}
        for x in env_simplices(P, 2, bounds):
            by_first.setdefault(env_face(2, x), []).append(x)
            by_long.setdefault((env_face(1, x), env_face(2, x)), []).append(x)
        pools["twos"] = (by_first, by_long)

    count = 0
    limit = bounds.max_edges
    beta = edge.chain.betas[0]
    # m = 2: faces 1 (the long edge) and 2 (the given edge); the base picks gamma
    for g in pools["ones"].get(env_face(1, edge), []):
        b = g.chain.betas[0]
        for gamma in all_pointed_maps(beta.n, b.n):
            if beta.then(gamma) != b:
                continue
            base = Chain((beta.m, beta.n, b.n), (beta, gamma))
            faces = {1: g, 2: edge}
            if _too_big(faces, 2, bounds):
                continue
            count += 1
            n = len(_relative_fillers(P, faces, base, bounds))
            if n != 1:
                return CocartesianReport(False, count, {"m": 2, "fillers": n, "faces": faces, "base": base})
    if m_max == 3:
        by_first, by_long = pools["twos"]
        firsts = by_first.get(edge, [])
        for x3 in firsts:
            for x2 in firsts:
                # d_1 x1 = d_1 x2 and d_2 x1 = d_1 x3
                for x1 in by_long.get((env_face(1, x2), env_face(1, x3)), []):
                    objects = x1.chain.objects[:1] + x3.chain.objects[1:2] + x1.chain.objects[1:]
                    if limit is not None and sum(o.total for o in objects) > limit:
                        continue
                    # the horn must lie over a whole 3-simplex of the base
                    gammas = (x3.chain.betas[1], x1.chain.betas[1])
                    if gammas[0].then(gammas[1]) != x2.chain.betas[1]:
                        continue
                    faces = {1: x1, 2: x2, 3: x3}
                    base = Chain(tuple(o.n for o in objects), (beta,) + gammas)
                    count += 1
                    n = len(_relative_fillers(P, faces, base, bounds))
                    if n != 1:
                        return CocartesianReport(False, count, {"m": 3, "fillers": n, "faces": faces, "base": base})
    return CocartesianReport(True, count)


def _too_big(faces: dict, k: int, bounds: Bounds) -> bool:
    if bounds.max_edges is None:
        return False
    objects, _ = _horn_chain(faces, k)
    return sum(o.total for o in objects) > bounds.max_edges


def is_cocartesian(edge: EnvSimplex, m_max: int = 3, bounds: Bounds | None = None) -> bool:
    return cocartesian_report(edge, m_max, bounds).ok


def collapses_onto(G: EnvSimplex) -> dict:
    """For a simplex whose first arrow is a bijection on edges, report for
    the faces dropping object 1 and object m-1 whether repeating object 0
    of that face gives back the layered forest of ``G`` up to isomorphism."""
    c = G.chain
    first = c.alphas[0]
    if first.m != first.n or BASE in first.values:
        raise EnvError("first arrow is not a forest of 1-corollas")
    want = _shape(c.forest)
    return {i: _shape(dec_degeneracy(0, dec_face(i, c)).forest) == want
            for i in sorted({1, G.k - 1})}


def _shape(F: ForestSimplex) -> list:
    return sorted(layered_code(t, d) for t, d in zip(F.components, F.death_level))


# the Segal map and the fibre over <1> -------------------------------------------------


def part_restriction(s: EnvSimplex, j: int) -> EnvSimplex:
    """Keep part j at every level of a simplex lying over identities."""
    c = s.chain
    if any(b != identity_map(b.m) for b in c.betas):
        raise EnvError("simplex does not lie over identities")
    objects = tuple(DecObject((o.sizes[j - 1],)) for o in c.objects)
    mapping = {}
    for l, o in enumerate(c.objects):
        for n, e in enumerate(o.edges_of(j), 1):
            mapping[(l, e)] = (l, n)
    alphas = []
    for l, a in enumerate(c.alphas):
        src, dst = c.objects[l], c.objects[l + 1]
        alphas.append(PointedMap(objects[l].total, objects[l + 1].total,
                                 tuple(a(e) - dst.offset(j) for e in src.edges_of(j))))
    chain = DecChain(objects, (identity_map(1),) * c.k, tuple(alphas))
    moved = {}
    for x in s.dendrices:
        if c.part_of(x.tree.root) == j:
            y = relabel_dendrex(s.operad, x, {e: mapping[e] for e in x.tree.edges})
            moved[y.tree.root] = y
    xs = tuple(moved[t.root] for t in chain.forest.components)
    return EnvSimplex(chain, xs, s.operad)


@dataclass
class Comparison:
    left: int
    right: int
    injective: bool
    surjective: bool
    commutes: bool = True
    witness: object = None

    @property
    def ok(self) -> bool:
        return self.injective and self.surjective and self.commutes


def segal_compare(P: Operad, n: int, k: int, max_len: int) -> Comparison:
    """Compare the k-simplices over the constant chain at <n> with n-tuples
    of k-simplices over <1>; each level has at most ``max_len`` edges in
    total on both sides."""
    if n < 1:
        raise EnvError("n must be at least 1")
    bounds = Bounds(max_len, n)
    left = env_simplices(P, k, bounds, degenerate_base(n, k))
    single = env_simplices(P, k, Bounds(max_len, 1), degenerate_base(1, k))
    by_sizes: dict = {}
    for x in single:
        by_sizes.setdefault(tuple(o.total for o in x.chain.objects), []).append(x)
    right = set()
    for shapes in itertools.product(sorted(by_sizes), repeat=n):
        if all(sum(sz[l] for sz in shapes) <= max_len for l in range(k + 1)):
            right.update(itertools.product(*(by_sizes[sz] for sz in shapes)))
    images = {}
    witness = None
    for s in left:
        img = tuple(part_restriction(s, j) for j in range(1, n + 1))
        if img in images and witness is None:
            witness = (images[img], s)
        images[img] = s
    injective = len(images) == len(left)
    surjective = set(images) == right
    if witness is None and not surjective:
        witness = sorted(set(images) ^ right, key=repr)[0]
    return Comparison(len(left), len(right), injective, surjective, True, witness)


# the strict envelope ---------------------------------------------------------------


@dataclass(frozen=True)
class EnvMorphism:
    """``f`` sends source position i to target position f[i-1]; ``ops[j-1]``
    has output target[j-1] and inputs the source colours over j, in order."""

    source: tuple
    target: tuple
    f: tuple
    ops: tuple


def _check_morphism(P: Operad, g: EnvMorphism):
    if len(g.f) != len(g.source) or len(g.ops) != len(g.target):
        raise EnvError("morphism shape mismatch")
    for j, p in enumerate(g.ops, 1):
        ins = tuple(c for c, t in zip(g.source, g.f) if t == j)
        if tuple(P.profile(p)[0]) != ins or P.output(p) != g.target[j - 1]:
            raise EnvError(f"operation {p!r} has the wrong profile for slot {j}")


def envelope_hom(P: Operad, src: tuple, dst: tuple) -> list[EnvMorphism]:
    out = []
    n, m = len(src), len(dst)
    for f in itertools.product(range(1, m + 1), repeat=n):
        pools = []
        for j in range(1, m + 1):
            ins = tuple(c for c, t in zip(src, f) if t == j)
            pools.append(P.operations(ins, dst[j - 1]))
        for ops in itertools.product(*pools):
            out.append(EnvMorphism(tuple(src), tuple(dst), f, ops))
    return out


def envelope_out(P: Operad, src: tuple, max_len: int) -> list[EnvMorphism]:
    """Every morphism out of ``src`` whose target has length <= max_len."""
    out = []
    n = len(src)
    for m in range(max_len + 1):
        for f in itertools.product(range(1, m + 1), repeat=n):
            pools = []
            for j in range(1, m + 1):
                ins = tuple(c for c, t in zip(src, f) if t == j)
                pools.append([p for c in P.colours for p in P.operations(ins, c)])
            for ops in itertools.product(*pools):
                out.append(EnvMorphism(tuple(src), tuple(P.output(p) for p in ops), f, ops))
    return out


def envelope_identity(P: Operad, c: tuple) -> EnvMorphism:
    return EnvMorphism(tuple(c), tuple(c), tuple(range(1, len(c) + 1)), tuple(P.identity(x) for x in c))


def envelope_compose(P: Operad, g: EnvMorphism, f: EnvMorphism) -> EnvMorphism:
    """``g`` after ``f``: compose each operation of ``g`` with the
    operations of ``f`` feeding it, then restore the source order."""
    if f.target != g.source:
        raise EnvError("morphisms are not composable")
    ops = []
    for k in range(1, len(g.target) + 1):
        js = [j for j in range(1, len(g.source) + 1) if g.f[j - 1] == k]
        labels = [i for j in js for i in range(1, len(f.source) + 1) if f.f[i - 1] == j]
        r = P.compose(g.ops[k - 1], [f.ops[j - 1] for j in js])
        ops.append(P.act(r, argsort(labels)))
    fg = tuple(g.f[j - 1] for j in f.f)
    return EnvMorphism(f.source, g.target, fg, tuple(ops))


def envelope_tensor(x, y):
    """Concatenation of colour tuples, or block sum of morphisms."""
    if isinstance(x, EnvMorphism) and isinstance(y, EnvMorphism):
        shift = len(x.target)
        return EnvMorphism(x.source + y.source, x.target + y.target,
                           x.f + tuple(t + shift for t in y.f), x.ops + y.ops)
    return tuple(x) + tuple(y)


@dataclass(frozen=True)
class EnvChain:
    """A k-simplex of the nerve of the strict envelope."""

    objects: tuple
    morphisms: tuple

    @property
    def k(self) -> int:
        return len(self.morphisms)


def colour_tuples(P: Operad, max_len: int) -> list[tuple]:
    return [c for n in range(max_len + 1) for c in itertools.product(P.colours, repeat=n)]


def envelope_nerve(P: Operad, k: int, max_len: int) -> list[EnvChain]:
    memo: dict = {}

    def out_of(c):
        if c not in memo:
            memo[c] = envelope_out(P, c, max_len)
        return memo[c]

    found = []

    def rec(objs, mors):
        if len(mors) == k:
            found.append(EnvChain(tuple(objs), tuple(mors)))
            return
        for g in out_of(objs[-1]):
            rec(objs + [g.target], mors + [g])

    for c in colour_tuples(P, max_len):
        rec([c], [])
    return found


def nerve_face(P: Operad, i: int, x: EnvChain) -> EnvChain:
    mors = list(x.morphisms)
    if i == 0:
        mors = mors[1:]
    elif i == x.k:
        mors = mors[:-1]
    else:
        mors[i - 1:i + 1] = [envelope_compose(P, mors[i], mors[i - 1])]
    return EnvChain(x.objects[:i] + x.objects[i + 1:], tuple(mors))


def nerve_degeneracy(P: Operad, i: int, x: EnvChain) -> EnvChain:
    mors = list(x.morphisms)
    mors.insert(i, envelope_identity(P, x.objects[i]))
    return EnvChain(x.objects[:i + 1] + x.objects[i:], tuple(mors))


@lru_cache(maxsize=1 << 18)
def fibre_map(s: EnvSimplex) -> EnvChain:
    """Read a simplex over the constant chain at <1> as composable
    morphisms: colours level by level and the operation at each vertex."""
    c = s.chain
    if part(c) != degenerate_base(1, c.k):
        raise EnvError("simplex does not lie over <1>")
    ops = {}
    for x in s.dendrices:
        ops.update(zip(x.tree.vertices, x.ops))
    objects = s.levels()
    mors = []
    for l, a in enumerate(c.alphas):
        mors.append(EnvMorphism(objects[l], objects[l + 1], a.values,
                                tuple(ops[(l + 1, j)] for j in range(1, a.n + 1))))
    return EnvChain(objects, tuple(mors))


def fiber_compare(P: Operad, k: int, max_len: int) -> Comparison:
    """The fibre over <1> against the nerve of the strict envelope, on
    k-simplices with colour tuples of length <= max_len, together with
    the faces and degeneracies of every simplex."""
    left = env_simplices(P, k, Bounds(max_len, 1), degenerate_base(1, k))
    right = envelope_nerve(P, k, max_len)
    images = {}
    witness = None
    commutes = True
    for s in left:
        img = fibre_map(s)
        if img in images and witness is None:
            witness = ("not injective", images[img], s)
        images[img] = s
        for i in range(k + 1 if k else 0):
            if fibre_map(env_face(i, s)) != nerve_face(P, i, img):
                commutes = False
                witness = witness or ("face", i, s)
        for i in range(k + 1):
            if fibre_map(env_degeneracy(i, s)) != nerve_degeneracy(P, i, img):
                commutes = False
                witness = witness or ("degeneracy", i, s)
    injective = len(images) == len(left)
    surjective = set(images) == set(right)
    return Comparison(len(left), len(right), injective, surjective, commutes, witness)
