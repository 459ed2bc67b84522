"""Command-line front end.

    dendroidal trees --max-vertices 2 --max-arity 2
    dendroidal hom --source "v[eta]" --target "v[v[eta]]"
    dendroidal faces --tree "v[eta,eta]"
    dendroidal lift --tree "v[eta,eta]" --sub boundary --operad com --count-only
    dendroidal forest --chain "3>2>1: 1->1,2->1,3->2 | 1->1,2->*"
    dendroidal env build --operad com --max-k 2 --max-len 2 --out env.json
    dendroidal env verify --checks segal --n 2 --max-k 2
    dendroidal verify --criteria 1,2

Operads are JSON files, builtin names (com, as, free-binary, discrete) or
``omega:<term>``.  All output is deterministic.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from . import acceptance, omega
from .envelope import (Bounds, EnvError, cocartesian_lift, cocartesian_report, dec_objects, env_degeneracy,
                       env_face, env_simplices, fiber_compare, horns, inner_fillers, part, segal_compare)
from .forests import (ForestError, all_pointed_maps, chain_to_forest, forest_extend, horn_subcomplex,
                      parse_chain, render_ascii, render_dot, rl_subcomplex)
from .operads import OperadError, load_operad
from .subcomplexes import Subcomplex, SubcomplexError, extend, maps_to_nerve
from .trees import TreeError, enumerate_trees, format_edge, parse_term, to_term


@dataclass(frozen=True)
class RunConfig:
    """Bounds and inputs shared by the subcommands."""

    max_vertices: int = 3
    max_arity: int = 3
    max_k: int = 2
    max_len: int = 2
    max_parts: int = 2
    max_edges: int | None = None
    operad: str = "com"
    fmt: str = "text"

    def __post_init__(self):
        for name in ("max_vertices", "max_arity", "max_k", "max_len", "max_parts"):
            if getattr(self, name) < 0:
                raise ValueError(f"--{name.replace('_', '-')} must be non-negative")
        if self.max_edges is not None and self.max_edges < 0:
            raise ValueError("--max-edges must be non-negative")

    @property
    def bounds(self) -> Bounds:
        return Bounds(self.max_len, self.max_parts, self.max_edges)


def _config(args) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in keys and v is not None})


def _edge_map(m) -> str:
    return " ".join(f"{format_edge(e)}->{format_edge(f)}" for e, f in zip(m.domain.edges, m.images))


def _out(lines, stream=None):
    stream = stream or sys.stdout
    for line in lines:
        stream.write(line + "\n")


# trees and Omega -------------------------------------------------------------------


def cmd_trees(args) -> int:
    cfg = _config(args)
    trees = enumerate_trees(cfg.max_vertices, cfg.max_arity)
    if cfg.fmt == "json":
        print(json.dumps([to_term(t) for t in trees], indent=1))
    else:
        _out(to_term(t) for t in trees)
    return 0


def cmd_hom(args) -> int:
    T, S = parse_term(args.source), parse_term(args.target)
    homs = omega.hom_set(T, S)
    print(f"{len(homs)} morphisms {to_term(T)} -> {to_term(S)}")
    _out(_edge_map(m) for m in homs)
    return 0


def cmd_faces(args) -> int:
    T = parse_term(args.tree)
    for d in omega.elementary_faces(T):
        label = "" if d.label is None else f" {format_edge(d.label)}"
        edges = ",".join(format_edge(e) for e in d.domain.edges)
        print(f"{d.kind}{label}: {to_term(d.domain)} on edges {edges}")
    return 0


def cmd_degeneracies(args) -> int:
    T = parse_term(args.tree)
    for e in T.edges:
        s = omega.degeneracy(T, e)
        print(f"subdivide {format_edge(e)}: {to_term(s.domain)} via {_edge_map(s)}")
    return 0


# lifting problems --------------------------------------------------------------------


def _summary(counts: list[int]) -> list[str]:
    hist = Counter(counts)
    per = ", ".join(f"{n} extension{'s' if n != 1 else ''} x{hist[n]}" for n in sorted(hist))
    return [f"maps {len(counts)}", f"extensions {sum(counts)}", f"per map: {per or 'none'}"]


def cmd_lift(args) -> int:
    P = load_operad(args.operad)
    if (args.tree is None) == (args.chain is None):
        raise ValueError("give exactly one of --tree and --chain")
    if args.tree is not None:
        T = parse_term(args.tree)
        A = acceptance.parse_sub(T, args.sub)
        B = Subcomplex.full(T)
        counts = []
        for n, f in enumerate(maps_to_nerve(P, A)):
            found = extend(P, A, B, f)
            counts.append(len(found))
            if not args.count_only:
                print(f"map {n}: {len(found)} extensions")
                for g in found:
                    print(f"  {g.at(omega.face_key(T))}")
        _out(_summary(counts))
        return 0
    F = chain_to_forest(parse_chain(args.chain))
    kind, _, j = args.sub.partition(":")
    if kind == "rl":
        subs = rl_subcomplex(F)
    elif kind == "horn":
        subs = horn_subcomplex(int(j), F)
    else:
        raise ValueError("with --chain, --sub is rl or horn:J")
    pools = [maps_to_nerve(P, A) for A in subs]
    counts = []
    for n, fs in enumerate(itertools.product(*pools)):
        found = forest_extend(P, F, subs, list(fs))
        counts.append(len(found))
        if not args.count_only:
            print(f"map {n}: {len(found)} extensions")
    _out(_summary(counts))
    return 0


# forests ------------------------------------------------------------------------------


def cmd_forest(args) -> int:
    c = parse_chain(args.chain)
    F = chain_to_forest(c)
    if args.format == "dot":
        sys.stdout.write(render_dot(F))
    else:
        print(c)
        sys.stdout.write(render_ascii(F))
    return 0


# the envelope --------------------------------------------------------------------------


def _plain(x):
    if isinstance(x, tuple) and all(isinstance(i, int) for i in x):
        return format_edge(x)
    if isinstance(x, (str, int)):
        return x
    return repr(x)


def env_document(P, max_k: int, bounds: Bounds, name: str) -> dict:
    """Simplices per dimension with face and degeneracy tables and the
    projection to chains of pointed maps."""
    dims = [env_simplices(P, k, bounds) for k in range(max_k + 1)]
    index = [{s: n for n, s in enumerate(layer)} for layer in dims]
    out = []
    for k, layer in enumerate(dims):
        rows = []
        for n, s in enumerate(layer):
            row = {
                "id": n,
                "chain": str(s.chain),
                "projection": str(part(s.chain)),
                "levels": [[_plain(c) for c in lv] for lv in s.levels()],
                "dendrices": [{"edges": [f"{l}:{e}" for l, e in x.tree.edges],
                               "colours": [_plain(c) for c in x.colours],
                               "vertices": [f"{l}:{e}" for l, e in x.tree.vertices],
                               "ops": [_plain(p) for p in x.ops]} for x in s.dendrices],
                "faces": [index[k - 1][env_face(i, s)] for i in range(k + 1)] if k else [],
            }
            if k < max_k:
                # a degeneracy can leave the edge bound; those entries are null
                row["degeneracies"] = [index[k + 1].get(env_degeneracy(i, s)) for i in range(k + 1)]
            rows.append(row)
        out.append({"k": k, "count": len(layer), "simplices": rows})
    return {"operad": name, "bounds": {"max_k": max_k, "max_len": bounds.max_len,
                                       "max_parts": bounds.max_parts, "max_edges": bounds.max_edges},
            "dimensions": out}


def cmd_env_build(args) -> int:
    cfg = _config(args)
    P = load_operad(cfg.operad)
    doc = env_document(P, cfg.max_k, cfg.bounds, cfg.operad)
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        counts = ", ".join(f"k={d['k']}: {d['count']}" for d in doc["dimensions"])
        print(f"wrote {args.out} ({counts})")
    else:
        sys.stdout.write(text)
    return 0


ENV_CHECKS = ("inner-fill", "cocart", "segal", "fiber")


def _env_inner(P, cfg) -> tuple[bool, str]:
    b = cfg.bounds
    count = 0
    for k in range(2, cfg.max_k + 1):
        pool = env_simplices(P, k - 1, b)
        for j in range(1, k):
            for h in horns(P, k, j, b, pool):
                count += 1
                n = len(inner_fillers(P, h, j))
                if n != 1:
                    faces = "; ".join(f"d{i}={x.chain}" for i, x in sorted(h.items()))
                    return False, f"horn k={k} j={j} has {n} fillers: {faces}"
    return True, f"{count} inner horns fill uniquely"


def _env_cocart(P, cfg) -> tuple[bool, str]:
    b = cfg.bounds
    pools: dict = {}
    count = 0
    for obj in dec_objects(b):
        for cols in itertools.product(P.colours, repeat=obj.total):
            for m in range(b.max_parts + 1):
                for beta in all_pointed_maps(obj.n, m):
                    e = cocartesian_lift(P, obj, cols, beta)
                    if e.chain.objects[1].total > b.max_len:
                        continue
                    count += 1
                    r = cocartesian_report(e, min(3, max(2, cfg.max_k)), b, pools)
                    if not r.ok:
                        return False, f"lift {e.chain} fails at m={r.witness['m']} with {r.witness['fillers']} fillers"
    return True, f"{count} lifts are cocartesian"


def _env_segal(P, cfg, n_max: int) -> tuple[bool, str]:
    count = 0
    for n in range(1, n_max + 1):
        for k in range(cfg.max_k + 1):
            c = segal_compare(P, n, k, cfg.max_len)
            count += c.left
            if not c.ok:
                return False, f"n={n} k={k}: {c.left} vs {c.right}, witness {c.witness}"
    return True, f"{count} simplices, all Segal maps bijective"


def _env_fiber(P, cfg) -> tuple[bool, str]:
    count = 0
    for k in range(cfg.max_k + 1):
        c = fiber_compare(P, k, cfg.max_len)
        count += c.left
        if not c.ok:
            return False, f"k={k}: {c.left} vs {c.right}, witness {c.witness}"
    return True, f"{count} simplices match the strict envelope"


def cmd_env_verify(args) -> int:
    cfg = _config(args)
    P = load_operad(cfg.operad)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = sorted(set(checks) - set(ENV_CHECKS))
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {', '.join(ENV_CHECKS)}")
    failed = 0
    for name in checks:
        if name == "inner-fill":
            ok, detail = _env_inner(P, cfg)
        elif name == "cocart":
            ok, detail = _env_cocart(P, cfg)
        elif name == "segal":
            ok, detail = _env_segal(P, cfg, args.n)
        else:
            ok, detail = _env_fiber(P, cfg)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 1 if failed else 0


# the acceptance report -------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.replay:
        doc = json.loads(Path(args.replay).read_text())
        for w in doc if isinstance(doc, list) else [doc]:
            print(acceptance.replay(w))
        return 0
    numbers = sorted(acceptance.CRITERIA) if not args.criteria else [int(x) for x in args.criteria.split(",")]
    witnesses = []
    failed = 0
    for n in numbers:
        if n not in acceptance.CRITERIA:
            raise ValueError(f"no criterion {n}")
        out = acceptance.run(n)
        print(out.line() if args.timings else out.line().rsplit(" in ", 1)[0])
        for w in out.witnesses:
            print("  witness " + json.dumps(w, sort_keys=True))
        witnesses += out.witnesses
        failed += not out.passed
    if args.witness_out:
        Path(args.witness_out).write_text(json.dumps(witnesses, indent=1, sort_keys=True) + "\n")
    print(f"{len(numbers) - failed}/{len(numbers)} criteria pass")
    return 1 if failed else 0


# argument parsing --------------------------------------------------------------------------


def _bounds(p, *names):
    for name in names:
        p.add_argument(f"--{name}", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dendroidal", description="Trees, operads, forests and envelopes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", help="list trees up to isomorphism")
    _bounds(p, "max-vertices", "max-arity")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("hom", help="morphisms of trees")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("faces", help="elementary faces of a tree")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("degeneracies", help="degeneracies out of a tree")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_degeneracies)

    p = sub.add_parser("lift", help="count extensions of maps into a nerve")
    p.add_argument("--tree")
    p.add_argument("--chain", help="a chain of pointed maps; --sub is then rl or horn:J")
    p.add_argument("--sub", required=True,
                   help="boundary, inner-horn:E, leaf-horn:V, root-horn or spine (E, V are paths like 0.1)")
    p.add_argument("--operad", required=True)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("forest", help="draw the forest of a chain of pointed maps")
    p.add_argument("--chain", required=True)
    p.add_argument("--format", choices=("ascii", "dot"), default="ascii")
    p.set_defaults(func=cmd_forest)

    env = sub.add_parser("env", help="the envelope within bounds").add_subparsers(dest="action", required=True)
    p = env.add_parser("build", help="export simplices with faces, degeneracies and projection")
    p.add_argument("--operad", default="com")
    _bounds(p, "max-k", "max-len", "max-parts", "max-edges")
    p.add_argument("--out")
    p.set_defaults(func=cmd_env_build)
    p = env.add_parser("verify", help="check envelope properties within bounds")
    p.add_argument("--operad", default="com")
    p.add_argument("--checks", default=",".join(ENV_CHECKS))
    p.add_argument("--n", type=int, default=2, help="largest number of parts for the Segal check")
    _bounds(p, "max-k", "max-len", "max-parts", "max-edges")
    p.set_defaults(func=cmd_env_verify)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--criteria", help="comma-separated numbers, default all")
    p.add_argument("--witness-out", help="write all witnesses as JSON")
    p.add_argument("--replay", help="re-run the witnesses in a JSON file")
    p.add_argument("--timings", action="store_true", help="show run times (output then varies)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TreeError, OperadError, ForestError, EnvError, SubcomplexError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
