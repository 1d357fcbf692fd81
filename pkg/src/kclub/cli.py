"""``kclub`` command line: gen, encode, solve, verify, stats, bench, oracle."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
import time
from pathlib import Path

from . import bench
from .cnf import EncodingTooLarge, write_wcnf
from .encode import METHODS, encode
from .graph import Graph, density, induced_diameter, is_k_club
from .graphio import GraphFormat, GraphParseError, read_graph, write_graph
from .oracle import max_k_club_bruteforce
from .randgen import (GenerationExhausted, format_metadata, generate_connected_with_attempts,
                      metadata, preset)

log = logging.getLogger("kclub")

GRAPH_SUFFIXES = {".edges", ".edge", ".el", ".txt", ".col", ".clq", ".graph", ".metis"}


class CliError(Exception):
    """Bad input reported as a one-line message with exit status 2."""


def _load(path: str, fmt: str | None) -> Graph:
    try:
        return read_graph(path, fmt)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _name(path: str) -> str:
    return Path(path).stem


# --- subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        params = [preset(args.n, args.density, args.ndv, args.seed + i) for i in range(args.count)]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    for i, p in enumerate(params):
        try:
            g, attempts = generate_connected_with_attempts(p, args.max_attempts)
        except GenerationExhausted as exc:
            raise CliError(str(exc)) from None
        stem = f"n{args.n}_d{args.density:g}_{args.ndv}_{i:02d}"
        (out / f"{stem}.edges").write_text(write_graph(g, GraphFormat.EDGE))
        (out / f"{stem}.meta").write_text(format_metadata(metadata(p, g, attempts)))
        print(out / f"{stem}.edges")
    return 0


def cmd_encode(args) -> int:
    g = _load(args.graph, args.format)
    t0 = time.monotonic()
    try:
        e = encode(g, args.k, args.method)
    except EncodingTooLarge as exc:
        raise CliError(str(exc)) from None
    elapsed = time.monotonic() - t0
    stem = args.out or str(Path(args.graph).with_suffix("")) + f".k{args.k}.{args.method}"
    wcnf_path = stem if stem.endswith(".wcnf") else stem + ".wcnf"
    Path(wcnf_path).write_text(write_wcnf(e.formula, style=args.style))
    Path(wcnf_path[:-5] + ".varmap").write_text(e.varmap.dumps())
    print(f"{_name(args.graph)} k={args.k} method={args.method} vars={e.num_vars} "
          f"clauses={e.num_clauses} soft={len(e.formula.soft)} hard={len(e.formula.hard)} "
          f"encode_s={elapsed:.4f} out={wcnf_path}")
    return 0


def cmd_solve(args) -> int:
    g = _load(args.graph, args.format)
    try:
        rec, witness = bench.run_instance(g, _name(args.graph), args.k, args.method, args.solver,
                                          args.time_limit)
    except bench.VerificationError as exc:
        print(f"error: verification failed: {exc}", file=sys.stderr)
        return 3
    except (ValueError, EncodingTooLarge) as exc:
        raise CliError(str(exc)) from None
    text = bench.records_csv([rec])
    text += "witness: " + " ".join(str(v) for v in _labels(g, witness)) + "\n"
    _emit(text, args.out)
    return 0


def _labels(g: Graph, nodes) -> list:
    nodes = sorted(nodes)
    if g.labels is None:
        return nodes
    return [g.labels[v - 1] for v in nodes]


def cmd_verify(args) -> int:
    g = _load(args.graph, args.format)
    nodes = []
    for tok in " ".join(args.nodes).replace(",", " ").split():
        try:
            v = int(tok)
        except ValueError:
            raise CliError(f"node {tok!r} is not an integer") from None
        if not 1 <= v <= g.n:
            raise CliError(f"node {v} out of range 1..{g.n}")
        nodes.append(v)
    if not nodes:
        raise CliError("no nodes given")
    ok = is_k_club(g, nodes, args.k)
    diam = induced_diameter(g, nodes)
    shown = "inf" if math.isinf(diam) else str(int(diam))
    print(f"{args.k}-club: {'yes' if ok else 'no'}")
    print(f"induced diameter: {shown}")
    return 0 if ok else 1


def cmd_stats(args) -> int:
    paths = sorted(p for p in Path(args.instance_dir).iterdir()
                   if p.is_file() and p.suffix.lower() in GRAPH_SUFFIXES)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "n", "m", "d"] + [f"omega_{k}" for k in args.k])
    for p in paths:
        try:
            g = read_graph(p, args.format)
        except (OSError, GraphParseError) as exc:
            log.warning("skipping %s: %s", p, exc)
            continue
        cells = []
        for k in args.k:
            rec, _ = bench.run_instance(g, p.stem, k, args.method, args.solver, args.time_limit)
            cells.append(rec.omega_cell())
        d = f"{density(g):.4f}" if g.n > 1 else "0.0000"
        w.writerow([p.stem, g.n, g.m, d] + cells)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_bench(args) -> int:
    path = Path(args.config)
    try:
        cfg = bench.parse_config(path.read_text(), path.parent)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    except bench.ConfigError as exc:
        raise CliError(f"{path}: {exc}") from None
    if args.time_limit is not None:
        for cat in cfg.categories:
            cat.time_limit = args.time_limit
    rows = bench.run_config(cfg, workers=args.workers)
    runs = bench.records_csv([r for _, _, r in rows], [c for c, _, _ in rows])
    summary = bench.aggregates_csv(bench.aggregate(rows))
    if args.out:
        Path(args.out).write_text(runs)
        Path(args.out).with_suffix(".summary.csv").write_text(summary)
    else:
        sys.stdout.write(runs)
        if rows:
            sys.stdout.write("\n" + summary)
    return 0


def cmd_oracle(args) -> int:
    g = _load(args.graph, args.format)
    try:
        res = max_k_club_bruteforce(g, args.k)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(f"omega_{args.k} = {res.size}")
    print("witness: " + " ".join(str(v) for v in _labels(g, res.witness)))
    return 0


# --- argument parsing --------------------------------------------------------

def _positive(x: str) -> float:
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _k(x: str) -> int:
    v = int(x)
    if v < 1:
        raise argparse.ArgumentTypeError("k must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kclub", description="Maximum k-club search via partial MAX-SAT.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_args(p, k_many=False):
        p.add_argument("--format", choices=[f.value for f in GraphFormat],
                       help="graph file format (default: from the file suffix)")
        if k_many:
            p.add_argument("--k", type=_k, nargs="+", default=[2, 3, 4])
        else:
            p.add_argument("--k", type=_k, default=2)

    def solve_args(p):
        p.add_argument("--method", choices=METHODS, default="paths")
        p.add_argument("--solver", default="internal", help="internal | external:<cmd>")
        p.add_argument("--time-limit", type=_positive, default=bench.DEFAULT_TIME_LIMIT)

    p = sub.add_parser("gen", help="generate connected random graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", "-D", type=float, required=True)
    p.add_argument("--ndv", choices=["min", "max"], default="min")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-attempts", type=int, default=1000)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="write the WCNF encoding and its variable map")
    p.add_argument("graph")
    graph_args(p)
    p.add_argument("--method", choices=METHODS, default="paths")
    p.add_argument("--style", choices=["classic", "2022"], default="classic")
    p.add_argument("--out", help="output path (.wcnf); the .varmap goes next to it")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="find a maximum k-club")
    p.add_argument("graph")
    graph_args(p)
    solve_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check whether a node set is a k-club")
    p.add_argument("graph")
    p.add_argument("nodes", nargs="+")
    graph_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="n, m, density and club numbers for a directory")
    p.add_argument("instance_dir")
    graph_args(p, k_many=True)
    solve_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--workers", type=int)
    p.add_argument("--time-limit", type=_positive, help="override every category's limit")
    p.add_argument("--out", help="per-run CSV; the summary goes to <out>.summary.csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="brute-force club number (small graphs only)")
    p.add_argument("graph")
    graph_args(p)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
