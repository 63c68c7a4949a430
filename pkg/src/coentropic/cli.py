"""Command-line interface: ``coentropic <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import canon, props, search
from .entropy import DEFAULT_DIGITS, unnormalized_entropy, von_neumann_entropy
from .graph import Graph, GraphError, graph6_decode, graph6_encode, parse_edge_text
from .known_pairs import EXAMPLE_8_ENTROPY, EXAMPLE_8_SPECTRA, PAIR_COUNTS
from .quantum import (format_amplitudes, incidence_vector, partial_trace_E, partial_trace_V,
                      signless_incidence_vector)
from .spectral import charpoly, laplacian, spectrum

WORKERS_ENV = "COENTROPIC_WORKERS"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers

def _add_graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", help='edge list, "{{1,2},{1,3}}" or "3; {1,2} {1,3}"')
    src.add_argument("--graph6", dest="g6", help="graph6 string")
    p.add_argument("--n", type=int, help="vertex count for --edges (default: largest endpoint)")


def _read_graph(args) -> Graph:
    try:
        if args.g6 is not None:
            return graph6_decode(args.g6)
        return parse_edge_text(args.edges, args.n)
    except GraphError as exc:
        raise UsageError(str(exc)) from exc


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print("\n".join(lines))


def _matrix_lines(entries) -> list[str]:
    return ["  [" + ", ".join(str(x) for x in row) + "]" for row in entries]


# ---------------------------------------------------------------------------
# commands

def cmd_entropy(args) -> int:
    g = _read_graph(args)
    if g.m == 0 and not args.unnormalized:
        raise UsageError("entropy needs at least one edge")
    f = (unnormalized_entropy if args.unnormalized else von_neumann_entropy)(g, args.digits)
    label = "S_hat" if args.unnormalized else "S"
    payload = {"graph6": graph6_encode(g), "n": g.n, "m": g.m, "kind": f.kind,
               "closed_form": f.closed_form() if f.is_exact else None,
               "numeric": f.numeric_text(), "fingerprint": f.to_text()}
    lines = []
    if f.is_exact:
        lines.append(f"{label} = {f.closed_form()}")
    lines.append(f"{label} ~ {f.numeric_text()}")
    lines.append(f"fingerprint: {f.to_text()}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = _read_graph(args)
    cp = charpoly(laplacian(g))
    spec = spectrum(cp)
    values = [str(e) if spec.is_integral else str(e.approx(args.digits)) for e in spec.eigenvalues]
    payload = {"graph6": graph6_encode(g), "charpoly": list(map(str, cp.coeffs)),
               "integral": spec.is_integral, "spectrum": values}
    _emit(args, payload, [f"charpoly: {cp}", f"integral: {spec.is_integral}",
                          "spectrum: [" + ", ".join(values) + "]"])
    return EXIT_OK


def cmd_state(args) -> int:
    g = _read_graph(args)
    try:
        s = signless_incidence_vector(g) if args.signless else incidence_vector(g)
    except GraphError as exc:
        raise UsageError(str(exc)) from exc
    tr_e, tr_v = partial_trace_E(s), partial_trace_V(s)
    name = "phi_G" if args.signless else "psi_G"
    arcs = [f"({a + 1},{b + 1})" for a, b in s.arc_labels]
    payload = {"state": name, "dim_v": s.dim_v, "dim_e": s.dim_e, "arcs": arcs,
               "amplitudes": format_amplitudes(s), "norm_squared": str(s.norm_squared()),
               "trace_E": [[str(x) for x in row] for row in tr_e.entries],
               "trace_V": [[str(x) for x in row] for row in tr_v.entries]}
    lines = [f"{name}: dim {s.dim_v} x {s.dim_e}, norm^2 = {s.norm_squared()}",
             "arcs: " + " ".join(arcs), "amplitudes:"]
    lines += ["  " + a for a in format_amplitudes(s)]
    lines += ["tr_E:"] + _matrix_lines(tr_e.entries) + ["tr_V:"] + _matrix_lines(tr_v.entries)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_check_props(args) -> int:
    if not 2 <= args.n_max <= 8:
        raise UsageError("--n-max must be between 2 and 8")
    results = props.all_suites(args.n_max)
    payload = {"suites": [{"name": r.name, "checked": r.checked, "passed": r.passed,
                           "failures": r.failures[:20]} for r in results]}
    _emit(args, payload, [str(r) for r in results])
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_enumerate(args) -> int:
    if not 1 <= args.n <= canon.MAX_ENUM_N:
        raise UsageError(f"--n must be between 1 and {canon.MAX_ENUM_N}")
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        for g in canon.enumerate_graphs(args.n, args.connected, args.workers):
            out.write(graph6_encode(g) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _config(args, n: int, graph_class: str, cache: str | None) -> search.SearchConfig:
    try:
        return search.SearchConfig(
            n=n, graph_class=graph_class, numeric_digits=args.digits,
            match_digits=args.match_digits, group_by_edges=not args.no_group_by_edges,
            graph6_path=getattr(args, "graph6_file", None), cache_path=cache, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_search(args) -> int:
    cfg = _config(args, args.n, args.graph_class, args.cache)
    try:
        report = search.find_coentropic_pairs(cfg)
    except search.SourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        search.write_pairs(args.out, report.coentropic_pairs)
    if args.near_misses:
        search.write_pairs(args.near_misses, report.near_misses)
    if args.summary:
        search.write_summary(args.summary, [report])
    row = report.summary_row()
    lines = [f"{k}: {v}" for k, v in row.items()]
    if not args.out:
        lines += [f"{p.graph6[0]} {p.graph6[1]} m={p.m[0]},{p.m[1]} {p.match}"
                  for p in report.coentropic_pairs]
    _emit(args, {"summary": row, "pairs": [json.loads(p.to_json()) for p in report.coentropic_pairs]},
          lines)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    checks: list[tuple[str, bool, str]] = []
    for r in search.verify_table(args.digits):
        checks.append((f"table row {r.row}", r.passed,
                       f"m={r.m[0]} entropy={r.found} expected={r.expected}"))

    try:
        g, h = search.locate_example_pair()
        fg, fh = von_neumann_entropy(g, args.digits), von_neumann_entropy(h, args.digits)
        want = tuple(sorted(EXAMPLE_8_ENTROPY.items()))
        spectra_ok = all(spectrum(charpoly(laplacian(x))).integers() == list(s)
                         for x, s in zip((g, h), EXAMPLE_8_SPECTRA))
        ok = spectra_ok and fg.exact == want and fh.exact == want
        checks.append(("8-vertex example pair", ok,
                       f"{graph6_encode(g)} {graph6_encode(h)} S={fg.closed_form()}"))
    except search.NotFound as exc:
        checks.append(("8-vertex example pair", False, str(exc)))

    for n in range(8, args.max_n + 1):
        found = {}
        reports = {}
        for cls in ("all", "connected"):
            cache = os.path.join(args.cache_dir, f"charpolys_n{n}_{cls}.npz") if args.cache_dir else None
            rep = search.find_coentropic_pairs(_config(args, n, cls, cache))
            reports[cls] = rep
            found[cls] = len(rep.coentropic_pairs)
        matching = [c for c, k in found.items() if k == PAIR_COUNTS[n]]
        detail = f"expected {PAIR_COUNTS[n]}; all={found['all']} connected={found['connected']}"
        if matching:
            rep = reports[matching[0]]
            detail += f"; matches class {matching[0]}, unequal-edge pairs={rep.pairs_with_unequal_edges}"
        else:
            detail += "; found (connected): " + "; ".join(
                f"{p.graph6[0]}/{p.graph6[1]} m={p.m[0]}" for p in reports["connected"].coentropic_pairs)
        checks.append((f"pair count n={n}", bool(matching), detail))

    payload = {"checks": [{"name": a, "passed": b, "detail": c} for a, b, c in checks]}
    _emit(args, payload, [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, ok, detail in checks])
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_FAIL


def cmd_convert(args) -> int:
    g = _read_graph(args)
    if args.to == "graph6":
        text = graph6_encode(g)
    else:
        text = f"{g.n}; " + " ".join(f"{{{u},{v}}}" for u, v in g.edges_1based())
    _emit(args, {"graph6": graph6_encode(g), "edges": [list(e) for e in g.edges_1based()], "n": g.n},
          [text])
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coentropic",
                                     description="Graph Laplacian states, entropies and coentropic pairs.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="entropy fingerprint of a graph")
    _add_graph_args(p)
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    p.add_argument("--unnormalized", action="store_true", help="S_hat = -sum lambda ln lambda")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("spectrum", help="exact Laplacian charpoly and spectrum")
    _add_graph_args(p)
    p.add_argument("--digits", type=int, default=20)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("state", help="dump the incidence vector and its partial traces")
    _add_graph_args(p)
    p.add_argument("--signless", action="store_true", help="use phi_G instead of psi_G")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("check-props", help="run the exhaustive state identity suites")
    p.add_argument("--n-max", type=int, default=6)
    p.set_defaults(func=cmd_check_props)

    p = sub.add_parser("enumerate", help="stream one graph6 line per isomorphism class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--output", "-o")
    p.add_argument("--workers", type=int, default=default_workers())
    p.set_defaults(func=cmd_enumerate)

    def search_flags(p):
        p.add_argument("--digits", type=int, default=60)
        p.add_argument("--match-digits", type=int, default=50)
        p.add_argument("--no-group-by-edges", action="store_true")
        p.add_argument("--workers", type=int, default=default_workers())

    p = sub.add_parser("search", help="find coentropic, non-cospectral pairs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="graph_class", choices=("all", "connected"), default="connected")
    search_flags(p)
    p.add_argument("--out", help="JSON-lines file of pairs")
    p.add_argument("--summary", help="CSV summary file")
    p.add_argument("--near-misses", help="JSON-lines file of near misses")
    p.add_argument("--graph6", dest="graph6_file", help="read graphs from a graph6 file")
    p.add_argument("--cache", help="charpoly cache (.npz)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-paper", help="reference table, example pair and pair counts")
    search_flags(p)
    p.add_argument("--max-n", type=int, default=9, choices=(8, 9, 10))
    p.add_argument("--cache-dir", help="directory for charpoly caches")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("convert", help="translate between edge list and graph6")
    _add_graph_args(p)
    p.add_argument("--to", choices=("graph6", "edges"), required=True)
    p.set_defaults(func=cmd_convert)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
