"""Desk-scale acceptance checks shared by the test suite and ``verify``.

Each check returns an :class:`Outcome`.  Failures carry witnesses: small
JSON-ready dicts naming the operad, the shape and the index of the
offending instance, which :func:`replay` can re-run in isolation.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import omega
from .envelope import (Bounds, DecChain, DecObject, EnvError, EnvSimplex, all_pointed_maps, cocartesian_lift,
                       cocartesian_report, dec_chains, dec_degeneracy, dec_face, dec_objects, env_degeneracy,
                       env_face, env_simplices, fiber_compare, horns, inner_fillers, segal_compare)
from .forests import (Chain, PointedMap, arrow_from_map, compose_arrows, distinct_components,
                      horn_subcomplex, map_from_arrow, parse_chain, rl_subcomplex, simplicial_degeneracy,
                      simplicial_face)
from .operads import (Assoc, Com, OmegaOperad, Operad, free_binary, load_operad, morphism_to_dendrex,
                      nerve_dendrices, restrict)
from .subcomplexes import (Subcomplex, boundary, brute_force_extend, extend, inner_horn, leaf_horn,
                           maps_to_nerve, root_horn, spine)
from .trees import Tree, enumerate_trees, format_edge, parse_edge, parse_term, to_term

SEED = 20240617
ENV_SAMPLES = 300


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds <= self.budget

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        slow = "" if self.seconds <= self.budget else f" (over the {self.budget:.0f}s budget)"
        return f"{verdict} [{self.number:2}] {self.title}: {self.detail} in {self.seconds:.1f}s{slow}"


# operads and naming ------------------------------------------------------------------


def test_operads() -> list[Operad]:
    """Com, As, the free binary operad and the operads of trees with at most
    three vertices (arity at most three)."""
    return [Com(), Assoc(), free_binary()] + [OmegaOperad(t) for t in enumerate_trees(3, 3)]


def operad_spec(P: Operad) -> str:
    """A name that :func:`operads.load_operad` turns back into ``P``."""
    if isinstance(P, OmegaOperad):
        return "omega:" + to_term(P.tree)
    if isinstance(P, Com):
        return "com"
    if isinstance(P, Assoc):
        return "as"
    if P.name == "Free(mu)":
        return "free-binary"
    raise ValueError(f"no short name for {P!r}")


def tree_subcomplexes(T: Tree, kinds=("boundary", "inner", "leaf", "root", "spine")) -> list[tuple[str, Subcomplex]]:
    """Named subcomplexes in the ``--sub`` syntax of the command line."""
    found = []
    if "boundary" in kinds and not T.is_eta:
        found.append(("boundary", boundary(T)))
    if "inner" in kinds:
        found += [(f"inner-horn:{format_edge(e)}", inner_horn(T, e)) for e in T.inner_edges]
    if "leaf" in kinds and len(T.vertices) > 1:
        found += [(f"leaf-horn:{format_edge(v)}", leaf_horn(T, v)) for v in T.leaf_vertices()]
    if "root" in kinds and len(T.vertices) > 1 and omega.has_root_face(T):
        found.append(("root-horn", root_horn(T)))
    if "spine" in kinds:
        found.append(("spine", spine(T)))
    return found


def parse_sub(T: Tree, text: str) -> Subcomplex:
    kind, _, arg = text.partition(":")
    if kind == "boundary":
        return boundary(T)
    if kind == "spine":
        return spine(T)
    if kind == "root-horn":
        return root_horn(T)
    if kind == "inner-horn":
        return inner_horn(T, parse_edge(T, arg))
    if kind == "leaf-horn":
        return leaf_horn(T, parse_edge(T, arg))
    raise ValueError(f"unknown subcomplex {text!r}; use boundary, inner-horn:E, leaf-horn:V, root-horn or spine")


# the simplicial identities ------------------------------------------------------------


def simplicial_violations(x, face, degeneracy) -> list[str]:
    """Every failing instance of the simplicial identities at ``x``."""
    k = x.k
    bad = []
    for i, j in itertools.combinations(range(k + 1), 2):
        if k >= 2 and face(i, face(j, x)) != face(j - 1, face(i, x)):
            bad.append(f"d{i} d{j} = d{j - 1} d{i}")
    for j in range(k + 1):
        s = degeneracy(j, x)
        for i in range(k + 2):
            if i < j:
                ok = k == 0 or face(i, s) == degeneracy(j - 1, face(i, x))
            elif i in (j, j + 1):
                ok = face(i, s) == x
            else:
                ok = k == 0 or face(i, s) == degeneracy(j, face(i - 1, x))
            if not ok:
                bad.append(f"d{i} s{j}")
        for i in range(j + 1):
            if degeneracy(i, s) != degeneracy(j + 1, degeneracy(i, x)):
                bad.append(f"s{i} s{j}")
    return bad


def random_chain(rng: random.Random, k: int, max_size: int) -> Chain:
    sizes = [rng.randint(0, max_size) for _ in range(k + 1)]
    maps = [PointedMap(sizes[l], sizes[l + 1], tuple(rng.randint(0, sizes[l + 1]) for _ in range(sizes[l])))
            for l in range(k)]
    return Chain(tuple(sizes), tuple(maps))


def random_dec_chain(rng: random.Random, k: int, max_parts: int, max_len: int) -> DecChain:
    objects = []
    for _ in range(k + 1):
        n = rng.randint(0, max_parts)
        sizes = [0] * n
        for _ in range(rng.randint(0, max_len) if n else 0):
            sizes[rng.randrange(n)] += 1
        objects.append(DecObject(tuple(sizes)))
    betas, alphas = [], []
    for src, dst in zip(objects, objects[1:]):
        beta = PointedMap(src.n, dst.n, tuple(rng.randint(0, dst.n) for _ in range(src.n)))
        values = []
        for j in range(1, src.n + 1):
            i = beta(j)
            pool = [0] if i == 0 else list(dst.edges_of(i))
            values += [rng.choice(pool) if pool else None for _ in range(src.sizes[j - 1])]
        if None in values:
            # a part with edges cannot go to an empty part; send it to the basepoint
            return random_dec_chain(rng, k, max_parts, max_len)
        betas.append(beta)
        alphas.append(PointedMap(src.total, dst.total, tuple(values)))
    return DecChain(tuple(objects), tuple(betas), tuple(alphas))


def random_env_simplex(rng: random.Random, P: Operad, k: int, max_parts: int, max_len: int) -> EnvSimplex:
    """A random decorated chain with a random dendrex on each component."""
    while True:
        c = random_dec_chain(rng, k, max_parts, max_len)
        pools = [nerve_dendrices(P, t) for t in c.forest.components]
        if all(pools):
            return EnvSimplex(c, tuple(rng.choice(xs) for xs in pools), P)


# criteria ------------------------------------------------------------------------------


def check_dendroidal_identities() -> Outcome:
    """Composite faces of codimension two are reached from two different
    elementary faces, so they appear twice with equal image."""
    bad, pairs = [], 0
    trees = enumerate_trees(4, 3)
    for T in trees:
        reached: dict = {}
        for d in omega.elementary_faces(T):
            for g in omega.elementary_faces(d.domain):
                pairs += 1
                composite = g.then(d)
                # the edge map of the composite must land on the composite's image
                if set(omega.compose(d.morphism, g.morphism).images) != composite.key[0]:
                    bad.append({"criterion": 1, "tree": to_term(T), "reason": "image mismatch"})
                reached.setdefault(composite.key, set()).add(d.key)
        for key, via in reached.items():
            if len(via) < 2:
                bad.append({"criterion": 1, "tree": to_term(T),
                            "edges": sorted(format_edge(e) for e in key[0]), "reason": "reached one way only"})
    return Outcome(1, "dendroidal identities", not bad,
                   f"{pairs} composable pairs over {len(trees)} trees, {len(bad)} violations", witnesses=bad[:5])


def check_pointed_sets() -> Outcome:
    bad = []
    maps = {(m, n): list(all_pointed_maps(m, n)) for m in range(5) for n in range(5)}
    arrows = {key: [arrow_from_map(a) for a in ms] for key, ms in maps.items()}
    count = 0
    for key, ms in maps.items():
        for a, F in zip(ms, arrows[key]):
            if map_from_arrow(F) != a or arrow_from_map(map_from_arrow(F)) != F:
                bad.append({"criterion": 2, "map": str(a), "reason": "round trip"})
    arrow_of = {a: F for key in maps for a, F in zip(maps[key], arrows[key])}
    for m, n, p in itertools.product(range(5), repeat=3):
        for a, Fa in zip(maps[(m, n)], arrows[(m, n)]):
            for b, Fb in zip(maps[(n, p)], arrows[(n, p)]):
                count += 1
                if compose_arrows(Fb, Fa) != arrow_of[a.then(b)]:
                    bad.append({"criterion": 2, "first": str(a), "second": str(b), "reason": "composition"})
    return Outcome(2, "forests and pointed sets", not bad,
                   f"{sum(map(len, maps.values()))} maps, {count} composites, {len(bad)} mismatches",
                   witnesses=bad[:5])


def check_simplicial_identities() -> Outcome:
    rng = random.Random(SEED)
    counts = {"chains": 0, "decorated": 0, "envelope": 0}
    bad = []

    def run(kind, x, face, degeneracy, show):
        counts[kind] += 1
        for v in simplicial_violations(x, face, degeneracy):
            bad.append({"criterion": 3, "kind": kind, "simplex": show(x), "identity": v})

    # chains of pointed maps: exhaustive for sizes <= 2, sampled with sizes <= 3
    for k in range(3):
        for sizes in itertools.product(range(3), repeat=k + 1):
            pools = [list(all_pointed_maps(sizes[l], sizes[l + 1])) for l in range(k)]
            for maps in itertools.product(*pools):
                run("chains", Chain(sizes, maps), simplicial_face, simplicial_degeneracy, str)
    for k in range(5):
        for _ in range(400):
            run("chains", random_chain(rng, k, 3), simplicial_face, simplicial_degeneracy, str)
    # decorated chains: exhaustive with one part or one edge per level, sampled beyond
    for k in range(3):
        for b in (Bounds(2, 1), Bounds(1, 2)):
            for c in dec_chains(k, b):
                run("decorated", c, dec_face, dec_degeneracy, str)
    for k in range(5):
        for _ in range(400):
            run("decorated", random_dec_chain(rng, k, 3, 3), dec_face, dec_degeneracy, str)
    # the envelope: exhaustive up to one part per level in dimensions 2 and 3, sampled with two
    for P in (Com(), Assoc(), free_binary()):
        for k, b in ((0, Bounds(2, 2)), (1, Bounds(2, 2)), (2, Bounds(2, 1, 5)), (3, Bounds(2, 1, 5))):
            for x in env_simplices(P, k, b):
                run("envelope", x, env_face, env_degeneracy, lambda x: str(x.chain))
        for k in (2, 3):
            for _ in range(ENV_SAMPLES):
                x = random_env_simplex(rng, P, k, 2, 2)
                run("envelope", x, env_face, env_degeneracy, lambda x: str(x.chain))
    detail = ", ".join(f"{n} {kind}" for kind, n in counts.items()) + f", {len(bad)} violations"
    return Outcome(3, "simplicial identities", not bad, detail, witnesses=bad[:5])


def check_inner_kan() -> Outcome:
    trees = enumerate_trees(4, 3)
    bad, count = [], 0
    for P in test_operads():
        for T in trees:
            B = Subcomplex.full(T)
            for name, A in tree_subcomplexes(T, ("inner",)):
                for n, f in enumerate(maps_to_nerve(P, A)):
                    count += 1
                    got = len(extend(P, A, B, f))
                    if got != 1:
                        bad.append({"criterion": 4, "operad": operad_spec(P), "tree": to_term(T),
                                    "sub": name, "map": n, "extensions": got})
    return Outcome(4, "inner horns of trees fill uniquely", not bad,
                   f"{count} horn maps over {len(trees)} trees, {len(bad)} failures", witnesses=bad[:5])


def _forest_problems(kind: str, k: int, F, j=None):
    """The componentwise lifting problem of a standalone component."""
    A = rl_subcomplex(F)[0] if kind == "rl" else horn_subcomplex(j, F)[0]
    return F.components[0], A


def _component_lifts(number: int, kind: str, operads, js) -> tuple[int, list]:
    comps = {k: distinct_components(k, 8) for k in (2, 3)}
    bad, count = [], 0
    for P in operads:
        for k in (2, 3):
            for c, F in enumerate(comps[k]):
                for j in js(k):
                    T, A = _forest_problems(kind, k, F, j)
                    B = Subcomplex.full(T)
                    for n, f in enumerate(maps_to_nerve(P, A)):
                        count += 1
                        got = len(extend(P, A, B, f))
                        if got != 1:
                            bad.append({"criterion": number, "operad": operad_spec(P), "k": k, "component": c,
                                        "horn": j, "map": n, "extensions": got})
    return count, bad


def check_rl_lifts() -> Outcome:
    count, bad = _component_lifts(5, "rl", test_operads(), lambda k: [None])
    return Outcome(5, "first-and-last faces extend uniquely", not bad,
                   f"{count} maps from component pieces, {len(bad)} failures", witnesses=bad[:5])


def outer_horn_witness(P: Operad | None = None) -> dict | None:
    """The first map from an outer horn of a forest component that does not
    extend uniquely."""
    P = P or Assoc()
    for k in (2, 3):
        for c, F in enumerate(distinct_components(k, 8)):
            for j in (0, k):
                T, A = _forest_problems("horn", k, F, j)
                for n, f in enumerate(maps_to_nerve(P, A)):
                    got = len(extend(P, A, Subcomplex.full(T), f))
                    if got != 1:
                        return {"criterion": 6, "operad": operad_spec(P), "k": k, "component": c,
                                "horn": j, "map": n, "extensions": got,
                                "forest": to_term(T), "values": [repr(x) for _, x in f.values]}
    return None


def check_horn_lifts() -> Outcome:
    count, bad = _component_lifts(6, "horn", test_operads(), lambda k: range(1, k))
    outer = outer_horn_witness()
    ok = not bad and outer is not None
    detail = f"{count} maps from inner horns, {len(bad)} failures; "
    detail += (f"outer horn j={outer['horn']} of a {outer['k']}-simplex has {outer['extensions']} extensions"
               if outer else "no outer horn failure found")
    return Outcome(6, "inner horns of forests extend uniquely", ok, detail,
                   witnesses=bad[:5] + ([outer] if outer else []))


ENV_HORN_BOUNDS = ((2, Bounds(2, 2, 6)), (3, Bounds(2, 1, 6)), (3, Bounds(2, 2, 3)))
SMALL_OPERADS = ("com", "as", "free-binary")


def check_env_inner_horns() -> Outcome:
    bad, count = [], 0
    for name in SMALL_OPERADS:
        P = load_operad(name)
        for k, b in ENV_HORN_BOUNDS:
            pool = env_simplices(P, k - 1, b)
            for j in range(1, k):
                for n, h in enumerate(horns(P, k, j, b, pool)):
                    count += 1
                    got = len(inner_fillers(P, h, j))
                    if got != 1:
                        bad.append({"criterion": 7, "operad": name, "k": k, "horn": j, "bounds": list(_b(b)),
                                    "index": n, "fillers": got})
    return Outcome(7, "envelope inner horns fill uniquely", not bad,
                   f"{count} horns, {len(bad)} failures", witnesses=bad[:5])


def _b(b: Bounds) -> tuple:
    return (b.max_len, b.max_parts, b.max_edges)


COCART_BOUNDS = Bounds(2, 2, 4)


def cocartesian_lifts(P: Operad, b: Bounds):
    """Every lift within bounds, in a fixed order."""
    for obj in dec_objects(b):
        for cols in itertools.product(P.colours, repeat=obj.total):
            for m in range(b.max_parts + 1):
                for beta in all_pointed_maps(obj.n, m):
                    e = cocartesian_lift(P, obj, cols, beta)
                    if e.chain.objects[1].total <= b.max_len:
                        yield e


def check_cocartesian() -> Outcome:
    bad, count, total = [], 0, 0
    for name in SMALL_OPERADS + ("omega:v[eta]",):
        P = load_operad(name)
        pools: dict = {}
        for n, e in enumerate(cocartesian_lifts(P, COCART_BOUNDS)):
            r = cocartesian_report(e, 3, COCART_BOUNDS, pools)
            count += 1
            total += r.horns
            if not r.ok:
                bad.append({"criterion": 8, "operad": name, "index": n, "edge": str(e.chain),
                            "m": r.witness["m"], "fillers": r.witness["fillers"]})
    return Outcome(8, "cocartesian lifts", not bad,
                   f"{count} lifts, {total} relative horns, {len(bad)} failures", witnesses=bad[:5])


SEGAL_LEN = 3


def check_segal() -> Outcome:
    bad, sizes = [], []
    for name in SMALL_OPERADS:
        P = load_operad(name)
        for n in (1, 2, 3):
            for k in (0, 1, 2):
                c = segal_compare(P, n, k, SEGAL_LEN)
                sizes.append(c.left)
                if not c.ok or c.left != c.right:
                    bad.append({"criterion": 9, "operad": name, "n": n, "k": k, "max_len": SEGAL_LEN,
                                "left": c.left, "right": c.right})
    return Outcome(9, "Segal maps are bijections", not bad,
                   f"{len(sizes)} comparisons, {sum(sizes)} simplices, {len(bad)} failures", witnesses=bad[:5])


FIBRE_RUNS = ((0, 2), (1, 2), (2, 2), (3, 2))
FIBRE_WIDE = ((0, 3), (1, 3), (2, 3))


def check_fibre() -> Outcome:
    bad, count = [], 0
    runs = [(P, k, L) for P in test_operads() for k, L in FIBRE_RUNS]
    runs += [(load_operad(name), k, L) for name in SMALL_OPERADS for k, L in FIBRE_WIDE]
    for P, k, L in runs:
        c = fiber_compare(P, k, L)
        count += c.left
        if not c.ok:
            bad.append({"criterion": 10, "operad": operad_spec(P), "k": k, "max_len": L,
                        "left": c.left, "right": c.right, "commutes": c.commutes})
    return Outcome(10, "fibre over <1> is the strict envelope", not bad,
                   f"{len(runs)} comparisons, {count} simplices, {len(bad)} failures", witnesses=bad[:5])


def check_representables() -> Outcome:
    trees = enumerate_trees(3, 3)
    bad, count = [], 0
    for S in trees:
        P = OmegaOperad(S)
        for T in trees:
            homs = omega.hom_set(T, S)
            xs = nerve_dendrices(P, T)
            count += 1
            mapped = {morphism_to_dendrex(m) for m in homs}
            if len(xs) != len(homs) or mapped != set(xs):
                bad.append({"criterion": 11, "S": to_term(S), "T": to_term(T),
                            "dendrices": len(xs), "morphisms": len(homs)})
                continue
            faces = omega.elementary_faces(T)
            if not faces:
                continue
            d = faces[0]
            for m in homs:
                if restrict(P, morphism_to_dendrex(m), d) != morphism_to_dendrex(omega.compose(m, d.morphism)):
                    bad.append({"criterion": 11, "S": to_term(S), "T": to_term(T), "reason": "not natural"})
                    break
    return Outcome(11, "nerves of trees are representable", not bad,
                   f"{count} pairs of trees, {len(bad)} failures", witnesses=bad[:5])


def check_extend_brute_force() -> Outcome:
    bad, count = [], 0
    ops = [Com(), Assoc(), free_binary(), OmegaOperad(parse_term("v[v[eta],eta]"))]
    for T in enumerate_trees(3, 3):
        full = Subcomplex.full(T)
        for P in ops:
            for name, A in tree_subcomplexes(T):
                for n, f in enumerate(maps_to_nerve(P, A)):
                    count += 1
                    got = sorted(repr(g.values) for g in extend(P, A, full, f))
                    want = sorted(repr(g.values) for g in brute_force_extend(P, A, full, f))
                    if got != want:
                        bad.append({"criterion": 12, "operad": operad_spec(P), "tree": to_term(T),
                                    "sub": name, "map": n})
    return Outcome(12, "solver agrees with brute force", not bad,
                   f"{count} lifting problems, {len(bad)} disagreements", witnesses=bad[:5])


CRITERIA = {
    1: (check_dendroidal_identities, 30),
    2: (check_pointed_sets, 60),
    3: (check_simplicial_identities, 60),
    4: (check_inner_kan, 120),
    5: (check_rl_lifts, 300),
    6: (check_horn_lifts, 300),
    7: (check_env_inner_horns, 300),
    8: (check_cocartesian, 300),
    9: (check_segal, 120),
    10: (check_fibre, 120),
    11: (check_representables, 120),
    12: (check_extend_brute_force, 120),
}


def run(number: int) -> Outcome:
    fn, budget = CRITERIA[number]
    t0 = time.perf_counter()
    out = fn()
    out.seconds = time.perf_counter() - t0
    out.budget = budget
    return out


# replaying witnesses ------------------------------------------------------------------


def replay(w: dict) -> str:
    """Re-run the single instance a witness points at and describe it."""
    n = w.get("criterion")
    if n in (4, 12) and "tree" in w:
        P, T = load_operad(w["operad"]), parse_term(w["tree"])
        A = parse_sub(T, w["sub"])
        f = maps_to_nerve(P, A)[w["map"]]
        got = len(extend(P, A, Subcomplex.full(T), f))
        line = f"{w['sub']} of {w['tree']} in {w['operad']}: map {w['map']} has {got} extensions"
        if n == 12:
            line += f", brute force finds {len(brute_force_extend(P, A, Subcomplex.full(T), f))}"
        return line
    if n in (5, 6):
        P = load_operad(w["operad"])
        F = distinct_components(w["k"], 8)[w["component"]]
        T, A = _forest_problems("rl" if n == 5 else "horn", w["k"], F, w.get("horn"))
        f = maps_to_nerve(P, A)[w["map"]]
        got = len(extend(P, A, Subcomplex.full(T), f))
        return f"component {w['component']} of a {w['k']}-simplex in {w['operad']}: map {w['map']} has {got} extensions"
    if n == 7:
        P = load_operad(w["operad"])
        b = Bounds(*w["bounds"])
        h = next(itertools.islice(horns(P, w["k"], w["horn"], b), w["index"], None))
        fillers = inner_fillers(P, h, w["horn"])
        return f"horn {w['index']} ({w['k']}, {w['horn']}) in {w['operad']}: {len(fillers)} fillers"
    if n == 8:
        P = load_operad(w["operad"])
        e = next(itertools.islice(cocartesian_lifts(P, COCART_BOUNDS), w["index"], None))
        r = cocartesian_report(e, 3, COCART_BOUNDS)
        return f"lift {e.chain} in {w['operad']}: {'cocartesian' if r.ok else r.witness}"
    if n == 9:
        c = segal_compare(load_operad(w["operad"]), w["n"], w["k"], w["max_len"])
        return f"segal n={w['n']} k={w['k']}: {c.left} vs {c.right}, bijective={c.ok}"
    if n == 10:
        c = fiber_compare(load_operad(w["operad"]), w["k"], w["max_len"])
        return f"fibre k={w['k']}: {c.left} vs {c.right}, ok={c.ok}, witness={c.witness}"
    if n == 11:
        S, T = parse_term(w["S"]), parse_term(w["T"])
        return (f"{len(nerve_dendrices(OmegaOperad(S), T))} dendrices, "
                f"{len(omega.hom_set(T, S))} morphisms")
    if n == 1:
        T = parse_term(w["tree"])
        return f"{w['tree']}: {len(omega.elementary_faces(T))} elementary faces"
    if n == 3 and w.get("kind") == "chains":
        c = parse_chain(w["simplex"])
        return "; ".join(simplicial_violations(c, simplicial_face, simplicial_degeneracy)) or "no violations"
    raise EnvError(f"cannot replay {w!r}")
