"""Command-line front end.

Graph arguments are family specs (``complete_bipartite:3,3``,
``k23:corona:complete:4``), paths to edge-list or JSON files, or ``-`` for
standard input.  Family-spec grammar::

    spec   := prefix ":" spec | family [":" args]
    prefix := "k23" | "corona" [int] | "copies" int
    args   := int ("," int)*

``k23`` replaces each edge by K_{2,3}; ``corona[r]`` hangs r leaves on every
vertex; ``copies d`` takes d disjoint copies.  Where a comparison target is
accepted, ``A x B`` denotes the Cartesian product.

Exit codes: 0 success, 1 failed check or non-isomorphic pair, 2 usage or
input error, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import graphcore, kernels, recon
from .errors import PdReconError, ResourceCapError
from .graphcore import Graph, format_set
from .iso import are_isomorphic, uniqueness_search
from .properties import PropertyKind, minimal_x_sets, minimum_x_sets, upper_x, x_number

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def load_graph(arg: str) -> Graph:
    if arg == "-":
        return graphcore.loads_graph(sys.stdin.read(), "stdin")
    if os.path.isfile(arg):
        with open(arg) as fh:
            return graphcore.loads_graph(fh.read(), os.path.basename(arg))
    return graphcore.generate(arg)


def load_target(arg: str) -> Graph:
    """A graph argument, or a Cartesian product ``A x B x ...`` of them."""
    parts = [p.strip() for p in arg.split(" x ")]
    g = load_graph(parts[0])
    for p in parts[1:]:
        g = graphcore.cartesian_product(g, load_graph(p), limit=None)
    return g


def _header(g: Graph) -> str:
    return f"graph {g.name or '-'}: n={g.n} m={g.size}"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph_text(g: Graph, fmt: str) -> str:
    if fmt == "json":
        return graphcore.to_json(g) + "\n"
    if fmt == "dot":
        lines = [f'graph "{g.name}" {{'] + [f"  {v};" for v in range(g.n)]
        lines += [f"  {u} -- {v};" for u, v in g.edges()]
        return "\n".join(lines + ["}"]) + "\n"
    return graphcore.to_edgelist(g)


def _recon_text(r: recon.ReconGraph, fmt: str) -> str:
    if fmt == "json":
        return recon.to_json(r) + "\n"
    if fmt == "dot":
        return recon.to_dot(r)
    # edge list of the reconfiguration graph, vertices in canonical order
    return graphcore.to_edgelist(r.as_graph())


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    _emit(_graph_text(load_graph(args.graph), args.format), args.output)
    return EXIT_OK


def cmd_property(args) -> int:
    kind = PropertyKind.parse(args.command)
    g = load_graph(args.graph)
    lines = [_header(g), f"{kind.value} = {x_number(g, kind)}"]
    if args.sets == "minimum":
        fam = minimum_x_sets(g, kind)
    elif args.sets == "minimal":
        fam = minimal_x_sets(g, kind)
    elif args.sets == "upper":
        up = upper_x(g, kind)
        lines.append(f"upper_{kind.value} = {up}")
        fam = [s for s in minimal_x_sets(g, kind) if s.bit_count() == up]
    else:
        fam = None
    if fam is not None:
        fam = list(fam)
        lines.append(f"{args.sets} sets: {len(fam)}")
        lines += [format_set(s) for s in fam]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _report_recon(args, r: recon.ReconGraph) -> list[str]:
    lines = [_header(r.base), f"{r.model} {r.kind.value}: order={r.order} size={r.size}"]
    if args.metrics:
        m = recon.recon_metrics(r)
        for key, val in m.as_dict().items():
            lines.append(f"  {key} = {val}")
        if m.max_degree == m.min_degree:
            lines.append(f"  regular = {m.max_degree}")
    if args.compare:
        target = load_target(args.compare)
        phi = are_isomorphic(r.as_graph(), target)
        lines.append(f"  matches {args.compare}: {'yes' if phi is not None else 'no'}")
    return lines


def cmd_tar(args) -> int:
    kind = PropertyKind.parse(args.kind)
    g = load_graph(args.graph)
    r = recon.build_tar(g, kind, args.k, cap=args.cap)
    if args.format != "table":
        _emit(_recon_text(r, args.format), args.output)
        return EXIT_OK
    lines = _report_recon(args, r)
    if args.thresholds:
        th = recon.connectivity_thresholds(g, kind, cap=args.cap)
        lines += [f"  under_x0 = {th.under_x0}", f"  x0 = {th.x0}"]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_tj(args) -> int:
    kind = PropertyKind.parse(args.kind)
    r = recon.build_tj(load_graph(args.graph), kind, cap=args.cap)
    if args.format != "table":
        _emit(_recon_text(r, args.format), args.output)
        return EXIT_OK
    _emit("\n".join(_report_recon(args, r)) + "\n", args.output)
    return EXIT_OK


def cmd_iso(args) -> int:
    a, b = load_target(args.a), load_target(args.b)
    phi = are_isomorphic(a, b)
    if phi is None:
        print("not isomorphic")
        return EXIT_FAIL
    print("isomorphic")
    print(" ".join(f"{v}->{w}" for v, w in enumerate(phi)))
    return EXIT_OK


def cmd_unique(args) -> int:
    kind = PropertyKind.parse(args.kind)
    g = load_graph(args.graph)
    found = uniqueness_search(g, args.n, kind)
    lines = [f"{len(found)} graph(s) of order {args.n} share the TAR graph of {g.name or 'input'}"]
    for h in found:
        lines.append(" ".join(f"{u}-{v}" for u, v in h.edges()))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import format_table, run_suite, to_jsonl

    ids = [i for chunk in (args.only or []) for i in chunk.split(",") if i]
    results = run_suite(ids or None, args.budget, args.workers)
    text = to_jsonl(results) if args.json else format_table(results) + "\n"
    _emit(text, args.output)
    return EXIT_FAIL if any(r.status == "fail" for r in results) else EXIT_OK


def cmd_export(args) -> int:
    g = load_graph(args.graph)
    kind = PropertyKind.parse(args.kind)
    if args.recon == "tar":
        text = _recon_text(recon.build_tar(g, kind, args.k, cap=args.cap), args.format)
    elif args.recon == "tj":
        text = _recon_text(recon.build_tj(g, kind, cap=args.cap), args.format)
    else:
        text = _graph_text(g, args.format)
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pdrecon",
        description="Power domination sets and their reconfiguration graphs.",
        epilog=f"kernel backend: {kernels.BACKEND}",
    )
    p.add_argument("--cap", type=_positive, default=recon.DEFAULT_CAP, help="max reconfiguration-graph order (env PDRECON_RECON_CAP)")
    p.add_argument("--workers", type=_positive, default=1, help="parallel workers for verify")
    p.add_argument("-o", "--output", help="write output to this path instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="print a graph from a family spec")
    s.add_argument("graph")
    s.add_argument("--format", choices=["edgelist", "json", "dot"], default="edgelist")
    s.set_defaults(func=cmd_gen)

    for name, what in (("pd", "power domination"), ("dom", "domination"), ("zf", "zero forcing")):
        s = sub.add_parser(name, help=f"{what} number and sets")
        s.add_argument("graph")
        s.add_argument("--sets", choices=["minimal", "minimum", "upper"])
        s.set_defaults(func=cmd_property)

    kinds = [k.value for k in PropertyKind]
    s = sub.add_parser("tar", help="token addition/removal graph")
    s.add_argument("graph")
    s.add_argument("--k", type=int, help="restrict to sets of size <= k")
    s.add_argument("--kind", choices=kinds, default="pd")
    s.add_argument("--metrics", action="store_true")
    s.add_argument("--thresholds", action="store_true", help="under-x0 and x0 connectivity thresholds")
    s.add_argument("--compare", metavar="GRAPH", help="test isomorphism with GRAPH (A x B for products)")
    s.add_argument("--format", choices=["table", "json", "dot", "edgelist"], default="table")
    s.set_defaults(func=cmd_tar)

    s = sub.add_parser("tj", help="token jumping graph on minimum sets")
    s.add_argument("graph")
    s.add_argument("--kind", choices=kinds, default="pd")
    s.add_argument("--metrics", action="store_true")
    s.add_argument("--compare", metavar="GRAPH", help="test isomorphism with GRAPH (A x B for products)")
    s.add_argument("--format", choices=["table", "json", "dot", "edgelist"], default="table")
    s.set_defaults(func=cmd_tj)

    s = sub.add_parser("iso", help="isomorphism test with a witness mapping")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("unique", help="graphs of order N sharing the TAR graph")
    s.add_argument("graph")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--kind", choices=kinds, default="pd")
    s.set_defaults(func=cmd_unique)

    s = sub.add_parser("verify", help="run the verification checks")
    s.add_argument("--only", action="append", metavar="IDS", help="comma-separated check ids")
    s.add_argument("--budget", type=float, help="per-check time limit in seconds")
    s.add_argument("--json", action="store_true", help="JSON lines instead of a table")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export", help="serialise a graph or one of its reconfiguration graphs")
    s.add_argument("graph")
    s.add_argument("--format", choices=["dot", "json", "edgelist"], required=True)
    s.add_argument("--recon", choices=["tar", "tj"])
    s.add_argument("--k", type=int)
    s.add_argument("--kind", choices=kinds, default="pd")
    s.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"pdrecon: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PdReconError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"pdrecon: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
