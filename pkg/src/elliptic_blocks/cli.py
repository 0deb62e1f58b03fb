"""Command-line entry point: ``elliptic-blocks <command> ...``.

Exit codes: 0 success (including analysis outcomes such as INFINITE),
1 a violated check (the report names a witness), 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Callable

from . import blocks as blk_mod
from .blocks import (
    BlockError,
    OpenBlock,
    insert,
    labeled_graph_checks,
    make_h,
    parse_block,
    plan,
    replay,
    serialize_block,
    serialize_open_block,
    validate_block,
)
from .corpus import CorpusError, corpus_blocks, fixture_text, verify_corpus, _FIXTURES
from .exact_algebra import AlgebraError, nullspace_over_rationals
from .graph_core import GraphError, edge_key, parse_document, serialize_graph
from .laplacian import (
    LaplacianError,
    eigen_matrix,
    ModularLabeling,
    eigen_solutions_mod_p,
    no_adjacent_degree3,
    rational_triviality,
)
from .report import EXIT_INPUT_ERROR, Report, digest
from .search import SearchConstraints, search
from .torus_system import (
    DecorationError,
    finiteness,
    parse_branches,
    parse_decorated,
    reduce_to_gprime,
    validate_decorations,
)

SEED_ENV = "ELLIPTIC_BLOCKS_SEED"


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write_or_keep(text: str, out: str | None, report: Report, key: str) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
        report.data[key] = out
    else:
        report.data[key] = json.loads(text)


def _figure(args, name: str, draw: Callable[[str], str], report: Report) -> None:
    if not getattr(args, "figures", None):
        return
    report.figures.append(draw(os.path.join(args.figures, name)))


# --------------------------------------------------------------------------
# commands


def cmd_appendix(args) -> Report:
    if args.action == "export":
        report = Report("appendix export")
        os.makedirs(args.out, exist_ok=True)
        for name, (filename, _, _) in sorted(_FIXTURES.items()):
            path = os.path.join(args.out, filename)
            Path(path).write_text(fixture_text(name), encoding="utf-8")
            report.data[name] = path
        return report
    report = verify_corpus()
    if getattr(args, "figures", None):
        from .plotting import plot_block, plot_decorated
        from .corpus import special_pair

        for name, b in corpus_blocks().items():
            _figure(args, f"{name}.png", lambda p, b=b: plot_block(b, p), report)
        _figure(args, "special_pair.png",
                lambda p: plot_decorated(special_pair(), p, "all-equation branch: INFINITE"), report)
    return report


def _load_labeled(args):
    text = _read(args.graph)
    doc = parse_document(text, top_fields={"boundary_edge", "a", "b"})
    prime = args.prime if args.prime is not None else doc.prime
    if prime is None:
        raise InputError("no prime given (use --prime or a 'prime' field)")
    if doc.prime is not None and args.prime is not None and doc.prime != args.prime:
        raise InputError(f"--prime {args.prime} disagrees with file prime {doc.prime}")
    return text, doc, prime


def cmd_check(args) -> Report:
    text, doc, prime = _load_labeled(args)
    report = Report("check", digest(text, str(prime)))
    missing = set(doc.graph.vertices) - set(doc.labels)
    if missing:
        raise InputError(f"vertices without lambda: {sorted(missing)}")
    lam = ModularLabeling(prime, doc.labels)
    if "boundary_edge" in doc.extra:
        doc.prime = prime
        blk = blk_mod.block_from_document(doc, Path(args.graph).stem)
        checks = validate_block(blk).checks
    else:
        checks = labeled_graph_checks(doc.graph, lam)
    for c in checks:
        d = c.to_dict()
        info = {k: d[k] for k in ("witnesses", "advisory") if k in d}
        if c.advisory:
            report.results.append({"check": c.name, "passed": c.passed, **info})
        else:
            report.add(c.name, c.passed, **info)
    if getattr(args, "figures", None) and "boundary_edge" in doc.extra:
        from .plotting import plot_block

        _figure(args, f"{Path(args.graph).stem}.png", lambda p: plot_block(blk, p), report)
    return report


def cmd_solve(args) -> Report:
    text, doc, prime = _load_labeled(args)
    report = Report("solve", digest(text, str(prime)))
    basis = eigen_solutions_mod_p(doc.graph, prime)
    report.data["prime"] = prime
    report.data["dimension"] = len(basis)
    report.data["basis"] = [lam.vector(doc.graph) for lam in basis]
    report.data["vertex_order"] = list(doc.graph.vertices)
    return report


def cmd_rational_check(args) -> Report:
    text = _read(args.graph)
    g = parse_document(text, top_fields={"boundary_edge", "a", "b"}).graph
    report = Report("rational-check", digest(text))
    trivial = rational_triviality(g)
    info = {}
    if not trivial:
        vec = nullspace_over_rationals(eigen_matrix(g))[0]
        info["witnesses"] = [dict(zip(g.vertices, vec))]
    report.add("rational_triviality", trivial, **info)
    try:
        ok = no_adjacent_degree3(g)
        adj = [list(e) for e in g.edges if g.degree(e[0]) == 3 and g.degree(e[1]) == 3]
        report.results.append({"check": "no_adjacent_degree3", "passed": ok, "advisory": True,
                               **({"witnesses": adj} if adj else {})})
    except LaplacianError as exc:
        report.results.append({"check": "no_adjacent_degree3", "passed": False,
                               "advisory": True, "detail": str(exc)})
    return report


def cmd_finiteness(args) -> Report:
    text = _read(args.decorated)
    d = parse_decorated(text)
    btext = _read(args.branches) if args.branches else ""
    report = Report("finiteness", digest(text, btext))
    bad = validate_decorations(d)
    report.add("decorations", not bad, **({"witnesses": [str(v) for v in bad]} if bad else {}))
    if bad:
        return report
    branches = parse_branches(btext) if btext else None
    rows = finiteness(d, branches, cap=args.cap)
    report.data["branches"] = [r.to_dict() for r in rows]
    if getattr(args, "figures", None):
        from .plotting import plot_decorated

        head = rows[0]
        _figure(args, f"{Path(args.decorated).stem}.png",
                lambda p: plot_decorated(d, p, f"first branch: {head.size}"), report)
    return report


def cmd_reduce(args) -> Report:
    text = _read(args.decorated)
    d = parse_decorated(text)
    report = Report("reduce", digest(text))
    try:
        gp = reduce_to_gprime(d)
    except DecorationError as exc:
        report.add("reducible", False, witnesses=str(exc).split("; "))
        return report
    report.add("reducible", True)
    _write_or_keep(serialize_graph(gp), args.out, report, "graph")
    return report


def cmd_make_h(args) -> Report:
    text = _read(args.block)
    blk = parse_block(text, Path(args.block).stem)
    report = Report("make-h", digest(text))
    h = make_h(blk)
    report.data["edges"] = h.edge_count
    report.data["betti"] = h.betti
    report.data["ends"] = [list(h.start), list(h.end)]
    _write_or_keep(serialize_open_block(h), args.out, report, "open_block")
    if getattr(args, "figures", None):
        from .plotting import plot_block

        _figure(args, f"{Path(args.block).stem}_open.png", lambda p: plot_block(h, p), report)
    return report


def _open_block_from(text: str, name: str) -> OpenBlock:
    """Accept either a closed block (cut open here) or a make-h output."""
    doc = parse_document(text, top_fields={"boundary_edge", "a", "b"})
    g = doc.graph
    v, w = doc.extra.get("boundary_edge", [None, None])
    if v in g and w in g and g.degree(v) == 2 and g.degree(w) == 2:
        return make_h(blk_mod.block_from_document(doc, name))
    if doc.prime is None or "a" not in doc.extra or "b" not in doc.extra:
        raise InputError("open block file needs 'prime', 'a' and 'b'")
    lam = ModularLabeling(doc.prime, doc.labels)
    start = (str(v), str(w))
    others = [e for e in g.distinguished if e != edge_key(*start)]
    if len(others) != 1:
        raise InputError("open block needs exactly two distinguished edges")
    a, b = doc.extra["a"], doc.extra["b"]
    x, y = others[0]
    end = (x, y) if lam[x] == a else (y, x)
    closed_src = blk_mod.BuildingBlock(g, lam, start, a, b, name)
    return OpenBlock(g, lam, start, end, a, b, closed_src)


def cmd_insert(args) -> Report:
    host_text, h_text = _read(args.host), _read(args.h)
    host = parse_block(host_text, Path(args.host).stem)
    h = _open_block_from(h_text, Path(args.h).stem)
    parts = args.site.split(",")
    if len(parts) != 2:
        raise InputError("--site takes two vertex ids separated by a comma")
    report = Report("insert", digest(host_text, h_text, args.site))
    try:
        out = insert(host, (parts[0], parts[1]), h)
    except blk_mod.SurgeryError as exc:
        report.add("insert", False, witnesses=[str(exc)])
        return report
    report.add("insert", True)
    report.data["edges"] = out.edge_count
    report.data["betti"] = out.betti
    _write_or_keep(serialize_block(out), args.out, report, "block")
    if getattr(args, "figures", None):
        from .plotting import plot_block

        _figure(args, "inserted.png", lambda p: plot_block(out, p), report)
    return report


def cmd_plan(args) -> Report:
    report = Report("plan", digest(str(args.degree), str(args.genus)))
    blocks = corpus_blocks()
    result = plan(args.degree, args.genus, blocks)
    report.data["stated_bound"] = 43 * args.genus + 170
    report.data["construction_bound"] = 43 * (args.genus - 1) + 170
    if result is None:
        rest = args.degree - 43 * (args.genus - 1)
        report.add("reachable", False, witnesses=[{
            "degree": args.degree, "genus": args.genus,
            "unrepresentable_remainder": rest, "denominations": [11, 18]}])
        report.data["plan"] = "UNREACHABLE"
    else:
        report.add("reachable", True)
        report.data["plan"] = result.to_dict()
        if args.replay:
            built = replay(result, blocks)
            report.add("replay_edges", built.edge_count == args.degree, value=built.edge_count)
            report.add("replay_betti", built.betti == args.genus, value=built.betti)
            if args.out:
                Path(args.out).write_text(serialize_block(built), encoding="utf-8")
                report.data["block"] = args.out
    if getattr(args, "figures", None):
        from .plotting import plot_reachability

        g_max = max(args.genus + 2, 5)
        d_max = max(args.degree + 60, 43 * g_max + 200)
        _figure(args, "reachability.png",
                lambda p: plot_reachability(blocks, g_max, d_max, p, result), report)
    return report


def cmd_search(args) -> Report:
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env is not None else 0
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    report = Report("search", digest(str(args.prime), str(args.max_vertices), str(seed),
                                     str(args.cycles_only)))
    cons = SearchConstraints(cycles_only=args.cycles_only, max_results=args.max_results,
                             random_samples=args.samples)
    found = search(args.prime, args.max_vertices, cons, seed)
    report.data["seed"] = seed
    report.data["count"] = len(found)
    entries = []
    for b in found:
        item = {"name": b.name, "vertices": len(b.graph), "edges": b.edge_count,
                "betti": b.betti, "a": b.a, "b": b.b}
        if args.out_dir:
            os.makedirs(args.out_dir, exist_ok=True)
            path = os.path.join(args.out_dir, f"{_safe(b.name)}.json")
            Path(path).write_text(serialize_block(b), encoding="utf-8")
            item["file"] = path
        entries.append(item)
    report.data["blocks"] = entries
    return report


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--figures", metavar="DIR", help="also write PNG figures into DIR")

    parser = argparse.ArgumentParser(prog="elliptic-blocks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("appendix", parents=[common], help="verify or export the reference blocks")
    p.add_argument("action", choices=["verify", "export"])
    p.add_argument("--out", default="fixtures", help="export directory")
    p.set_defaults(func=cmd_appendix)

    for name, func, text in (("check", cmd_check, "validate a labeled graph or block"),
                             ("solve", cmd_solve, "F_p eigen-space of the 5/3 equation")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--graph", required=True)
        p.add_argument("--prime", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("rational-check", parents=[common], help="is 5/3 an eigenvalue over Q")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_rational_check)

    p = sub.add_parser("finiteness", parents=[common], help="per-branch torus solution counts")
    p.add_argument("--decorated", required=True)
    p.add_argument("--branches")
    p.add_argument("--cap", type=int, default=2**16)
    p.set_defaults(func=cmd_finiteness)

    p = sub.add_parser("reduce", parents=[common], help="suppress red vertices")
    p.add_argument("--decorated", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("make-h", parents=[common], help="cut a block open at its boundary edge")
    p.add_argument("--block", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_make_h)

    p = sub.add_parser("insert", parents=[common], help="splice an open block into a host edge")
    p.add_argument("--host", required=True)
    p.add_argument("--site", required=True, help="u,v")
    p.add_argument("--h", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_insert)

    p = sub.add_parser("plan", parents=[common], help="blocks reaching d edges and genus g")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--replay", action="store_true", help="build the graph and re-check it")
    p.add_argument("--out", help="with --replay, write the built block here")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("search", parents=[common], help="look for new blocks")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--cycles-only", action="store_true")
    p.add_argument("--max-results", type=int, default=50)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_search)
    return parser


INPUT_ERRORS = (InputError, GraphError, DecorationError, LaplacianError, AlgebraError,
                BlockError, CorpusError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except INPUT_ERRORS as exc:
        report = Report(args.command)
        report.exit_status = EXIT_INPUT_ERROR
        report.data["error"] = f"{type(exc).__name__}: {exc}"
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
