"""Command-line entry point. Every subcommand except ``gen``, ``product`` and
``reproduce`` prints one JSON document tagged ``"schema": "v1"``.

Exit codes: 0 success, 1 error, 2 undecided within the search budget, 64 bad usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from .bhom import BHomMap, compose, find_bhom_to_complete, lift_left, lift_right, verify_b_homomorphism
from .chordal_descent import (
    check_final_corollary,
    descend_chordal_product,
    descend_complete_left,
)
from .coloring import Coloring, b_vertices, is_b_coloring, is_miss1_b_coloring, is_proper
from .exact import (
    DEFAULT_BUDGET,
    Status,
    b_chromatic_number,
    b_spectrum,
    check_relations,
    chromatic_number,
    exists_b_coloring,
)
from .graph import FAMILIES, BudgetExceeded, Graph, generate, parse_dimacs, write_dimacs
from .lexprod import lex_product
from .p4sparse import descend_p4sparse, primeval_decompose

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64

SCHEMA = "v1"
RANDOM_FAMILIES = {"random_chordal", "random_p4_sparse"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2, which means UNKNOWN here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------- input helpers


def load_graph(spec: str, seed: int = 0) -> Graph:
    """A DIMACS file path, ``-`` for standard input, or ``family:p1,p2`` inline."""
    if spec == "-":
        return parse_dimacs(sys.stdin.read())
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_dimacs(fh.read())
    family, _, rest = spec.partition(":")
    if family not in FAMILIES:
        raise UsageError(f"{spec!r} is neither a file nor a known family ({', '.join(sorted(FAMILIES))})")
    params = [p for p in rest.split(",") if p] if rest else []
    if family in RANDOM_FAMILIES and len(params) == 1:
        params.append(str(seed))
    return generate(family, params)


def _read_ints(path: str) -> list[int]:
    text = sys.stdin.read() if path == "-" else open(path).read()
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(tok) for tok in text.replace(",", " ").split()]


def load_coloring(path: str, n: int) -> Coloring:
    values = _read_ints(path)
    if len(values) != n:
        raise UsageError(f"colouring has {len(values)} entries, graph has {n} vertices")
    return Coloring.of(values)


def load_precoloring(path: str) -> dict[int, int]:
    """JSON object {"vertex": colour} or one ``vertex colour`` pair per line (0-based vertices)."""
    text = open(path).read().strip()
    if text.startswith("{"):
        return {int(v): int(c) for v, c in json.loads(text).items()}
    pre = {}
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            v, c = line.split()
            pre[int(v)] = int(c)
    return pre


def emit(payload: dict[str, Any]) -> None:
    print(json.dumps({"schema": SCHEMA, **payload}, indent=2))


def _budget(args: argparse.Namespace) -> int | None:
    return None if args.budget <= 0 else args.budget


# ---------------------------------------------------------------- subcommands


def cmd_gen(args: argparse.Namespace) -> int:
    params = list(args.params)
    if args.family in RANDOM_FAMILIES and len(params) == 1:
        params.append(str(args.seed))
    g = generate(args.family, params)
    sys.stdout.write(write_dimacs(g, [f"{args.family} {' '.join(params)}".rstrip()]))
    return EXIT_OK


def cmd_product(args: argparse.Namespace) -> int:
    p = lex_product(load_graph(args.left, args.seed), load_graph(args.right, args.seed))
    legend = [f"vertex {w + 1} = ({u}, {v})" for w, u, v in p.legend()]
    sys.stdout.write(write_dimacs(p.graph, [f"lexicographic product {args.left}[{args.right}]", *legend]))
    return EXIT_OK


def cmd_chi(args: argparse.Namespace) -> int:
    g = load_graph(args.graph, args.seed)
    chi, c = chromatic_number(g, _budget(args))
    emit({"command": "chi", "graph": args.graph, "chi": chi, "coloring": list(c.colors)})
    return EXIT_OK


def cmd_chib(args: argparse.Namespace) -> int:
    g = load_graph(args.graph, args.seed)
    chi_b, c = b_chromatic_number(g, _budget(args))
    emit({"command": "chib", "graph": args.graph, "chi_b": chi_b, "witness": list(c.colors)})
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    g = load_graph(args.graph, args.seed)
    rep = b_spectrum(g, _budget(args), graph_id=args.graph, jobs=args.jobs)
    emit({"command": "spectrum", **rep.to_json()})
    return EXIT_OK if rep.decided else EXIT_UNKNOWN


def cmd_bfind(args: argparse.Namespace) -> int:
    if (args.k is None) == (args.k_flag is None):
        raise UsageError("bfind needs K, either positional or via -k")
    args.k = args.k if args.k is not None else args.k_flag
    g = load_graph(args.graph, args.seed)
    pre = load_precoloring(args.pre) if args.pre else None
    res = exists_b_coloring(g, args.k, pre=pre, budget=_budget(args))
    emit({
        "command": "bfind",
        "graph": args.graph,
        "k": args.k,
        "status": res.status.value,
        "nodes": res.nodes,
        "coloring": list(res.coloring.colors) if res.coloring else None,
    })
    return EXIT_UNKNOWN if res.status is Status.UNKNOWN else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = load_graph(args.graph, args.seed)
    c = load_coloring(args.coloring, g.n)
    proper, edge = is_proper(g, c)
    out: dict[str, Any] = {"command": "verify", "graph": args.graph, "k": c.k, "proper": proper}
    if not proper:
        out["monochromatic_edge"] = list(edge)
    else:
        ok, bad = is_b_coloring(g, c)
        out["b_coloring"] = ok
        out["first_failing_color"] = bad
        out["b_vertices"] = {str(i): vs for i, vs in b_vertices(g, c).items()}
        if args.miss1:
            ok1, witness = is_miss1_b_coloring(g, c)
            out["miss1"] = ok1
            out["b_star_vertices"] = {str(i): w for i, w in witness.items()}
    emit(out)
    return EXIT_OK


def _verdict_json(f: BHomMap) -> dict[str, Any]:
    verdict = verify_b_homomorphism(f)
    return {
        "b_homomorphism": verdict.ok,
        "violating_edge": list(verdict.violating_edge) if verdict.violating_edge else None,
        "uncovered_vertex": verdict.uncovered,
    }


def _load_map(args: argparse.Namespace, src: str, tgt: str, path: str) -> BHomMap:
    return BHomMap(load_graph(src, args.seed), load_graph(tgt, args.seed), tuple(_read_ints(path)))


def cmd_hom(args: argparse.Namespace) -> int:
    action, graphs = args.action, args.graphs
    arity = {"verify": 2, "lift-left": 3, "lift-right": 3, "compose": 3, "to-complete": 1}[action]
    if len(graphs) != arity:
        raise UsageError(f"hom {action} takes {arity} graph argument(s), got {len(graphs)}")
    out: dict[str, Any] = {"command": "hom", "action": action, "graphs": graphs}
    if action == "to-complete":
        if args.m is None:
            raise UsageError("hom to-complete needs -m M")
        f, res = find_bhom_to_complete(load_graph(graphs[0], args.seed), args.m, _budget(args))
        out.update({"m": args.m, "status": res.status.value, "map": list(f.mapping) if f else None})
        emit(out)
        return EXIT_UNKNOWN if res.status is Status.UNKNOWN else EXIT_OK
    if args.map is None:
        raise UsageError(f"hom {action} needs --map")
    if action == "verify":
        f = _load_map(args, graphs[0], graphs[1], args.map)
    elif action == "lift-left":
        # G F H: lift f: F -> H to G[F] -> G[H]
        f = lift_left(load_graph(graphs[0], args.seed), _load_map(args, graphs[1], graphs[2], args.map))
    elif action == "lift-right":
        # F H G: lift f: F -> H to F[G] -> H[G]
        f = lift_right(_load_map(args, graphs[0], graphs[1], args.map), load_graph(graphs[2], args.seed))
    else:
        if args.map2 is None:
            raise UsageError("hom compose needs --map2 for the second map")
        f = compose(_load_map(args, graphs[0], graphs[1], args.map), _load_map(args, graphs[1], graphs[2], args.map2))
    out.update({"map": list(f.mapping), **_verdict_json(f)})
    emit(out)
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    g = load_graph(args.graph, args.seed)
    tree = primeval_decompose(g)
    emit({"command": "decompose", "graph": args.graph, "tree": tree.to_json()})
    return EXIT_OK


def cmd_descend_p4(args: argparse.Namespace) -> int:
    g = load_graph(args.graph, args.seed)
    psi = load_coloring(args.coloring, g.n * args.ell)
    res = descend_p4sparse(g, args.ell, psi, eliminate=args.eliminate)
    emit({
        "command": "descend-p4",
        "graph": args.graph,
        "ell": args.ell,
        "k": psi.k,
        "result": "coloring" if res.reduced else "clique",
        "coloring": list(res.coloring.colors) if res.coloring else None,
        "clique": list(res.certificate.vertices) if res.certificate else None,
        "trace": res.trace.to_json(),
    })
    return EXIT_OK


def cmd_descend_chordal(args: argparse.Namespace) -> int:
    g = load_graph(args.left, args.seed)
    h = load_graph(args.right, args.seed)
    psi = load_coloring(args.coloring, g.n * h.n)
    res = descend_chordal_product(g, h, psi)
    emit({
        "command": "descend-chordal",
        "k": psi.k,
        "coloring": list(res.coloring.colors),
        "order": list(res.order),
        "step": res.step.to_json(),
    })
    return EXIT_OK


def cmd_descend_kl(args: argparse.Namespace) -> int:
    h = load_graph(args.right, args.seed)
    psi = load_coloring(args.coloring, args.ell * h.n)
    res = descend_complete_left(args.ell, h, psi, _budget(args))
    emit({"command": "descend-kl", "ell": args.ell, "k": psi.k, **res.to_json()})
    return EXIT_OK if res.status is Status.FOUND else EXIT_UNKNOWN


def cmd_relations(args: argparse.Namespace) -> int:
    rep = check_relations(load_graph(args.left, args.seed), load_graph(args.right, args.seed), _budget(args))
    emit({"command": "relations", "left": args.left, "right": args.right, **rep.to_json()})
    if rep.passed is None:
        return EXIT_UNKNOWN
    return EXIT_OK if rep.passed else EXIT_ERROR


def cmd_corollary(args: argparse.Namespace) -> int:
    rep = check_final_corollary(load_graph(args.left, args.seed), load_graph(args.right, args.seed), _budget(args))
    emit({"command": "corollary", "left": args.left, "right": args.right, **rep.to_json()})
    return EXIT_UNKNOWN if rep.unknown else EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    from .reproduce import ROWS, run_row

    only = args.only.split(",") if args.only else None
    rows = []
    for rid, _, _ in ROWS:
        if only is None or rid in only:
            row = run_row(rid)
            rows.append(row)
            if not args.json:
                print(row.line(), flush=True)
    if args.json:
        emit({"command": "reproduce", "rows": [r.to_json() for r in rows]})
    if any(r.passed is False for r in rows):
        return EXIT_ERROR
    return EXIT_UNKNOWN if any(r.passed is None for r in rows) else EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="search node budget per exact search (0 = unlimited)")
    common.add_argument("--seed", type=int, default=0, help="seed for random graph families")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for per-k searches")

    parser = _Parser(prog="bchromatic", description="b-colourings of graphs and lexicographic products")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("gen", cmd_gen, "write a generated graph as DIMACS")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("params", nargs="*")

    p = add("product", cmd_product, "write G[H] as DIMACS")
    p.add_argument("left")
    p.add_argument("right")

    for name, fn, text in (
        ("chi", cmd_chi, "chromatic number"),
        ("chib", cmd_chib, "b-chromatic number"),
        ("spectrum", cmd_spectrum, "b-spectrum and continuity"),
        ("decompose", cmd_decompose, "primeval decomposition of a P4-sparse graph"),
    ):
        add(name, fn, text).add_argument("graph")

    p = add("bfind", cmd_bfind, "search for a b-colouring with k colours")
    p.add_argument("graph")
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("-k", dest="k_flag", type=int, metavar="K", help="number of colours (alternative to the positional K)")
    p.add_argument("--pre", help="precolouring file: JSON object or 'vertex colour' lines")

    p = add("verify", cmd_verify, "check a colouring")
    p.add_argument("graph")
    p.add_argument("--coloring", required=True)
    p.add_argument("--miss1", action="store_true", help="also check for b*-vertices ignoring colour 1")

    p = add("hom", cmd_hom, "verify, lift or compose b-homomorphisms, or find one onto K_m")
    p.add_argument("action", choices=["verify", "lift-left", "lift-right", "compose", "to-complete"])
    p.add_argument("graphs", nargs="+", metavar="GRAPH",
                   help="verify: F H; lift-left: G F H; lift-right: F H G; compose: F G H; to-complete: G")
    p.add_argument("--map", help="index-aligned target vertex list of the (first) map")
    p.add_argument("--map2", help="second map for compose")
    p.add_argument("-m", type=int, metavar="M", help="size of the complete target for to-complete")

    p = add("descend-p4", cmd_descend_p4, "remove one colour from a b-colouring of G[K_l], G P4-sparse")
    p.add_argument("graph")
    p.add_argument("-l", "--ell", type=int, required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--eliminate", type=int, default=1)

    p = add("descend-chordal", cmd_descend_chordal, "remove one colour from a b-colouring of G[H], G chordal")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--coloring", required=True)

    p = add("descend-kl", cmd_descend_kl, "remove one colour from a b-colouring of K_l[H]")
    p.add_argument("ell", type=int)
    p.add_argument("right")
    p.add_argument("--coloring", required=True)

    for name, fn, text in (
        ("relations", cmd_relations, "check the bounds between G[H], G[K_p] and K_q[H]"),
        ("corollary", cmd_corollary, "check which colour counts from n_H chi(G) up are realised"),
    ):
        p = add(name, fn, text)
        p.add_argument("left")
        p.add_argument("right")

    p = add("reproduce", cmd_reproduce, "run the acceptance table")
    p.add_argument("--only", help="comma-separated row ids")
    p.add_argument("--json", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bchromatic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        emit({"command": args.command, "status": Status.UNKNOWN.value, "reason": str(exc)})
        return EXIT_UNKNOWN
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"bchromatic: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
