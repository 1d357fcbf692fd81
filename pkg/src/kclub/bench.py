"""Experiment harness: single runs, config-driven batches, aggregation.

A run is encode -> solve -> decode -> verify. Its wall-clock total always
includes the encoding time. Timed-out runs enter time averages at the
time limit, and the number of such runs is reported next to the mean.
"""

from __future__ import annotations

import csv
import glob
import io
import logging
import os
import shlex
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

from .encode import METHODS, decode, encode, extend_assignment, greedy_seed
from .graph import Graph, density, is_k_club
from .graphio import read_graph
from .maxsat import SolveBudget, SolveResult, Status, optimality_gap, solve_external, solve_internal
from .randgen import generate_connected, preset

log = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 3600.0
#: Desk-scale limits used by CI-sized experiment presets.
DESK_TIME_LIMITS = (60.0, 300.0)
DEFAULT_WORKERS = max(1, min(4, os.cpu_count() or 1))


class VerificationError(AssertionError):
    """A reported solution is not a k-club. Always a defect, never a result."""


class ConfigError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


@dataclass(frozen=True)
class RunRecord:
    instance: str
    n: int
    m: int
    density: float
    k: int
    method: str
    solver: str
    status: str
    omega: int
    upper_bound: int
    gap: float
    encode_s: float
    solve_s: float
    total_s: float

    @property
    def solved(self) -> bool:
        return self.status == Status.OPTIMAL.value

    def omega_cell(self) -> str:
        """ω when proven, otherwise ``lb-ub``."""
        return str(self.omega) if self.solved else f"{self.omega}-{self.upper_bound}"


RUN_FIELDS = [f.name for f in fields(RunRecord)]


def parse_solver_spec(spec: str) -> tuple[str, list[str] | None]:
    """``internal`` or ``external:<command line>``."""
    if spec == "internal":
        return "internal", None
    if spec.startswith("external:"):
        cmd = shlex.split(spec[len("external:"):])
        if not cmd:
            raise ValueError("external solver needs a command, e.g. external:rc2.py -vvv")
        return "external", cmd
    raise ValueError(f"solver must be 'internal' or 'external:<cmd>', got {spec!r}")


def degree_order(g: Graph) -> list[int]:
    return sorted(g.nodes, key=lambda i: (-g.degree(i), i))


def run_instance(g: Graph, name: str, k: int, method: str = "paths", solver: str = "internal",
                 time_limit: float = DEFAULT_TIME_LIMIT) -> tuple[RunRecord, frozenset[int]]:
    """Solve one (graph, k) cell and verify the answer.

    Returns the record and the witness node set.

    Raises
    ------
    VerificationError
        If the decoded set fails ``is_k_club`` or an optimal result has a
        nonzero gap.
    """
    kind, cmd = parse_solver_spec(solver)
    t0 = time.monotonic()
    e = encode(g, k, method)
    t1 = time.monotonic()
    enc_s = t1 - t0
    budget = SolveBudget(max(time_limit - enc_s, 1e-3))
    seed = greedy_seed(g, k)
    if kind == "internal":
        res = solve_internal(e.formula, budget, order=degree_order(g),
                             initial=extend_assignment(e, seed))
    else:
        res = solve_external(e.formula, cmd, budget)
    t2 = time.monotonic()
    if res.best_assignment is None or (res.status is not Status.OPTIMAL and res.lower_bound < len(seed)):
        # nothing better than the seed came back: fall back on the seed
        res = SolveResult(Status.FEASIBLE, extend_assignment(e, seed), len(seed),
                          max(res.upper_bound, len(seed)), res.elapsed, res.nodes, res.conflicts,
                          res.solver)
    witness = decode(e, res.best_assignment)
    if len(witness) != res.lower_bound or not is_k_club(g, witness, k):
        raise VerificationError(f"{name}: solver returned a set that is not a {k}-club")
    gap = optimality_gap(res)
    if res.status is Status.OPTIMAL and gap != 0:
        raise VerificationError(f"{name}: optimal result with nonzero gap")
    total = time.monotonic() - t0
    rec = RunRecord(name, g.n, g.m, density(g) if g.n > 1 else 0.0, k, method,
                    kind if kind == "internal" else solver, res.status.value,
                    res.lower_bound, res.upper_bound, gap, enc_s, t2 - t1, total)
    return rec, witness


# --- config --------------------------------------------------------------------

@dataclass
class Category:
    name: str
    instances: list[str] = field(default_factory=list)   # glob patterns
    generate: dict | None = None                         # n, density, ndv, count, seed
    ks: list[int] = field(default_factory=lambda: [2])
    methods: list[str] = field(default_factory=lambda: ["paths"])
    solvers: list[str] = field(default_factory=lambda: ["internal"])
    time_limit: float = DEFAULT_TIME_LIMIT
    fmt: str | None = None


@dataclass
class BenchConfig:
    categories: list[Category]
    workers: int = DEFAULT_WORKERS
    time_limit: float = DEFAULT_TIME_LIMIT


_GEN_KEYS = {"n": int, "density": float, "ndv": str, "count": int, "seed": int}


def parse_config(text: str, base_dir: str | Path = ".") -> BenchConfig:
    """Read a line-oriented ``key = value`` config with ``[category]`` blocks.

    Keys before the first block are global (``workers``, ``time_limit``).
    Inside a block: ``instances`` (glob patterns, relative to ``base_dir``),
    ``n``/``density``/``ndv``/``count``/``seed`` for generated samples,
    ``k``, ``methods``, ``solvers`` (one per line, or ``;``-separated),
    ``time_limit`` and ``format``. ``#`` starts a comment.
    """
    base_dir = Path(base_dir)
    cfg = BenchConfig([])
    cur: Category | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise ConfigError(f"bad section header {raw.strip()!r}", lineno)
            cur = Category(line[1:-1].strip(), time_limit=cfg.time_limit)
            cfg.categories.append(cur)
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {raw.strip()!r}", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            _apply(cfg, cur, key, val, base_dir)
        except ConfigError as exc:
            raise ConfigError(str(exc), lineno) from None
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}", lineno) from None
    for cat in cfg.categories:
        if not cat.instances and cat.generate is None:
            raise ConfigError(f"category [{cat.name}] lists no instances")
        if cat.generate is not None:
            missing = [k for k in ("n", "density") if k not in cat.generate]
            if missing:
                raise ConfigError(f"category [{cat.name}] missing {', '.join(missing)}")
    return cfg


def _apply(cfg: BenchConfig, cur: Category | None, key: str, val: str, base_dir: Path) -> None:
    if cur is None:
        if key == "workers":
            cfg.workers = int(val)
            if cfg.workers < 1:
                raise ValueError("must be at least 1")
        elif key == "time_limit":
            cfg.time_limit = float(val)
            if cfg.time_limit <= 0:
                raise ValueError("must be positive")
        else:
            raise ConfigError(f"unknown global key {key!r}")
        return
    if key == "instances":
        cur.instances.extend(str(base_dir / p) for p in val.split())
    elif key in _GEN_KEYS:
        cur.generate = cur.generate or {}
        cur.generate[key] = _GEN_KEYS[key](val)
    elif key == "k":
        cur.ks = [int(x) for x in val.replace(",", " ").split()]
        if any(k < 1 for k in cur.ks):
            raise ValueError("k must be positive")
    elif key == "methods":
        cur.methods = val.replace(",", " ").split()
        bad = [m for m in cur.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown method {bad[0]!r}")
    elif key == "solvers":
        cur.solvers = [s.strip() for s in val.split(";") if s.strip()]
        for s in cur.solvers:
            parse_solver_spec(s)
    elif key == "time_limit":
        cur.time_limit = float(val)
        if cur.time_limit <= 0:
            raise ValueError("must be positive")
    elif key == "format":
        cur.fmt = val
    else:
        raise ConfigError(f"unknown key {key!r} in [{cur.name}]")


def category_graphs(cat: Category) -> list[tuple[str, Graph]]:
    """Instances of a category, in a deterministic order."""
    out = []
    for pat in cat.instances:
        paths = sorted(glob.glob(pat))
        if not paths:
            log.warning("[%s] pattern %s matches no files", cat.name, pat)
        for p in paths:
            out.append((Path(p).stem, read_graph(p, cat.fmt)))
    if cat.generate is not None:
        gp = cat.generate
        seed0 = gp.get("seed", 0)
        for i in range(gp.get("count", 10)):
            # one seed per sample keeps each sample reproducible on its own
            params = preset(gp["n"], gp["density"], gp.get("ndv", "min"), seed0 + i)
            out.append((f"{cat.name}-{i:02d}", generate_connected(params)))
    return out


# --- batch execution ----------------------------------------------------------

def _job(args):
    cat_name, g, name, k, method, solver, limit = args
    rec, _ = run_instance(g, name, k, method, solver, limit)
    return cat_name, limit, rec


def run_config(cfg: BenchConfig, workers: int | None = None, sink=None):
    """Run every cell of ``cfg``.

    Returns ``[(category, time_limit, RunRecord), ...]`` in config order,
    whatever order the workers finish in. ``sink(category, record)`` is
    called from this process only, in that same order.
    """
    jobs = []
    for cat in cfg.categories:
        for name, g in category_graphs(cat):
            for k in cat.ks:
                for method in cat.methods:
                    for solver in cat.solvers:
                        jobs.append((cat.name, g, name, k, method, solver, cat.time_limit))
    workers = workers or cfg.workers
    results = []
    if workers <= 1 or len(jobs) <= 1:
        it = map(_job, jobs)
        for item in it:
            results.append(item)
            if sink:
                sink(item[0], item[2])
        return results
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for item in pool.map(_job, jobs):
            results.append(item)
            if sink:
                sink(item[0], item[2])
    return results


@dataclass(frozen=True)
class Aggregate:
    category: str
    k: int
    method: str
    solver: str
    runs: int
    unsolved: int
    mean_time: float
    mean_gap: float
    mean_omega: float

    def time_cell(self) -> str:
        return f"{self.mean_time:.2f} ({self.unsolved})" if self.unsolved else f"{self.mean_time:.2f}"


AGG_FIELDS = [f.name for f in fields(Aggregate)] + ["time_cell"]


def aggregate(rows: Iterable[tuple[str, float, RunRecord]]) -> list[Aggregate]:
    """Per (category, k, method, solver) averages.

    Unsolved runs count at the time limit; ``mean_omega`` averages the best
    sizes found (lower bounds for unsolved runs).
    """
    groups: dict[tuple, list[tuple[float, RunRecord]]] = {}
    for cat, limit, rec in rows:
        groups.setdefault((cat, rec.k, rec.method, rec.solver), []).append((limit, rec))
    out = []
    for (cat, k, method, solver), items in groups.items():
        times = [rec.total_s if rec.solved else limit for limit, rec in items]
        out.append(Aggregate(cat, k, method, solver, len(items),
                             sum(not rec.solved for _, rec in items), fmean(times),
                             fmean(rec.gap for _, rec in items),
                             fmean(rec.omega for _, rec in items)))
    return out


def records_csv(records: Sequence[RunRecord], category: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = (["category"] if category is not None else []) + RUN_FIELDS
    w.writerow(head)
    for i, rec in enumerate(records):
        d = asdict(rec)
        row = [_fmt(d[f]) for f in RUN_FIELDS]
        w.writerow(([category[i]] if category is not None else []) + row)
    return buf.getvalue()


def aggregates_csv(aggs: Sequence[Aggregate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGG_FIELDS)
    for a in aggs:
        d = asdict(a)
        w.writerow([_fmt(d[f]) for f in AGG_FIELDS[:-1]] + [a.time_cell()])
    return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.4f}"
    return str(x)
