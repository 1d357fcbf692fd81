"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed
even when output capture is on) or directly with
``python tests/test_acceptance.py``.

Real-life instances for criterion 3 are read from ``$KCLUB_INSTANCES``
(default ``data/instances`` in the repository). Files are matched by stem
(``adjnoun``, ``football``, ``jazz``) with any supported graph suffix.
Set ``KCLUB_EXTERNAL_SOLVER`` (e.g. ``"rc2.py -vvv"``) to solve those cells
with an external solver and a 60 s limit instead of the internal engine
with 600 s.
"""

import os
import random
import sys
from pathlib import Path
from statistics import fmean

import pytest

from kclub.bench import run_instance
from kclub.cnf import (SolverOutputError, WcnfFormula, parse_solver_output, parse_wcnf,
                       violated_hard, write_wcnf)
from kclub.encode import decode, encode, encode_paths, extend_assignment, greedy_seed
from kclub.graph import cycle_graph, degree_variance, density, is_k_club
from kclub.graphio import read_graph
from kclub.maxsat import HardUnsatisfiable, SolveBudget, Status, solve_internal
from kclub.oracle import max_k_club_bruteforce, maxsat_bruteforce
from kclub.randgen import generate_connected, preset

ROOT = Path(__file__).resolve().parent.parent
INSTANCE_DIR = Path(os.environ.get("KCLUB_INSTANCES", ROOT / "data" / "instances"))
GRAPH_SUFFIXES = (".graph", ".metis", ".col", ".clq", ".edges", ".edge", ".txt")

_lines: list[str] = []


def report(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail}"
    _lines.append(line)
    sys.__stdout__.write("\n" + line + "\n")
    sys.__stdout__.flush()
    assert ok, line


# --- shared fixture: small connected random graphs ---------------------------

def small_graphs(count=104):
    out = []
    densities = [0.15, 0.25, 0.35, 0.45]
    for idx in range(count):
        n = 6 + idx % 9                       # 6..14
        d = densities[(idx // 9) % len(densities)]
        ndv = "min" if idx % 2 == 0 else "max"
        out.append((n, d, ndv, generate_connected(preset(n, d, ndv, 5000 + idx))))
    return out


SMALL = None


def _small():
    global SMALL
    if SMALL is None:
        SMALL = small_graphs()
    return SMALL


# --- criteria ---------------------------------------------------------------------

def test_c1_oracle_equivalence():
    graphs = _small()
    bad = []
    cells = 0
    for n, d, ndv, g in graphs:
        for k in (1, 2, 3, 4):
            want = max_k_club_bruteforce(g, k).size
            for method in ("paths", "reach"):
                e = encode(g, k, method)
                r = solve_internal(e.formula, SolveBudget(60))
                s = decode(e, r.best_assignment)
                cells += 1
                if r.status is not Status.OPTIMAL or r.lower_bound != want or not is_k_club(g, s, k):
                    bad.append((n, d, ndv, k, method, r.lower_bound, want))
    ndvs = {x[2] for x in graphs}
    ok = len(graphs) >= 100 and not bad and ndvs == {"min", "max"}
    report(1, "encoders + internal solver equal the brute-force oracle", ok,
           f"{len(graphs)} graphs, n 6-14, k 1-4, both encodings: {cells} cells, {len(bad)} mismatches"
           + (f"; first {bad[0]}" if bad else ""))


def test_c2_size_laws():
    graphs = [g for *_, g in _small()]
    rnd = random.Random(2)
    graphs += [generate_connected(preset(rnd.randint(20, 60), rnd.choice([0.1, 0.2]),
                                         rnd.choice(["min", "max"]), 7000 + i)) for i in range(20)]
    bad = []
    for g in graphs:
        n, m = g.n, g.m
        e2, e3 = encode_paths(g, 2), encode_paths(g, 3)
        if not (e2.num_clauses == n * (n + 1) // 2 - m and e2.num_vars == n):
            bad.append(("k=2", n, m, e2.num_vars, e2.num_clauses))
        if not (e3.num_vars <= n + m and e3.num_clauses <= n * (n + 1) // 2 + 2 * m):
            bad.append(("k=3", n, m, e3.num_vars, e3.num_clauses))
    report(2, "paths encoding size laws", not bad,
           f"{len(graphs)} graphs, {len(bad)} violations" + (f"; first {bad[0]}" if bad else ""))


TABLE = {
    # name: (n, m, d, {k: omega})
    "adjnoun": (112, 425, 0.0684, {2: 50, 3: 82, 4: 107}),
    "football": (115, 613, 0.0935, {2: 16, 3: 58, 4: 115}),
}
STRETCH = {"jazz": (198, 2742, 0.1406, {2: 103, 3: 174, 4: 192})}


def _find(name):
    for suf in GRAPH_SUFFIXES:
        p = INSTANCE_DIR / f"{name}{suf}"
        if p.exists():
            return p
    return None


def _solve_cells(name, spec):
    path = _find(name)
    if path is None:
        return None, [f"{name}: no file {name}.<graph|metis|col|edges> in {INSTANCE_DIR}"]
    g = read_graph(path)
    n, m, d, omegas = spec
    ext = os.environ.get("KCLUB_EXTERNAL_SOLVER")
    solver, limit = (f"external:{ext}", 60.0) if ext else ("internal", 600.0)
    problems = []
    if (g.n, g.m, round(density(g), 4)) != (n, m, d):
        problems.append(f"{name}: (n,m,d)=({g.n},{g.m},{density(g):.4f}), expected ({n},{m},{d})")
    for k, want in omegas.items():
        rec, _ = run_instance(g, name, k, "paths", solver, limit)
        if not rec.solved or rec.omega != want:
            problems.append(f"{name}: omega_{k} {rec.omega_cell()} expected {want}")
    return g, problems


def test_c3_real_instances():
    problems = []
    for name, spec in TABLE.items():
        problems += _solve_cells(name, spec)[1]
    report(3, "real-life instance statistics and club numbers", not problems,
           "adjnoun and football match" if not problems else "; ".join(problems))


@pytest.mark.skipif(_find("jazz") is None, reason="stretch instance jazz not present")
def test_c3_stretch_jazz():
    _, problems = _solve_cells("jazz", STRETCH["jazz"])
    line = f"[{'PASS' if not problems else 'FAIL'}] criterion 3 (stretch, non-blocking): jazz -- " \
           + ("; ".join(problems) or "matches")
    sys.__stdout__.write("\n" + line + "\n")


def test_c4_result_properties():
    issues = []
    runs = 0
    for seed, (d, ndv, k, method) in enumerate([(0.035, "min", 3, "paths"), (0.1, "max", 2, "paths"),
                                                (0.05, "min", 4, "reach"), (0.15, "max", 2, "reach"),
                                                (0.1, "min", 3, "reach")]):
        g = generate_connected(preset(100, d, ndv, 300 + seed))
        for limit in (600.0, 0.001):
            rec, w = run_instance(g, f"r{seed}", k, method, "internal", limit)
            runs += 1
            if not is_k_club(g, w, k) or len(w) != rec.omega:
                issues.append(f"r{seed}: witness fails is_k_club")
            if rec.solved and rec.gap != 0:
                issues.append(f"r{seed}: optimal with gap {rec.gap}")
            if not rec.omega <= rec.upper_bound:
                issues.append(f"r{seed}: lb {rec.omega} > ub {rec.upper_bound}")
            if limit < 1 and rec.omega < len(greedy_seed(g, k)):
                issues.append(f"r{seed}: timeout run lost the seed solution")
        # node-limited engine runs: bounds bracket the optimum, lb from a verified set
        e = encode(g, k, method)
        full = solve_internal(e.formula, SolveBudget(600))
        for nodes in (0, 10, 100):
            r = solve_internal(e.formula, SolveBudget(600, node_limit=nodes),
                               initial=extend_assignment(e, greedy_seed(g, k)))
            runs += 1
            s = decode(e, r.best_assignment)
            if not (r.lower_bound <= full.lower_bound <= r.upper_bound):
                issues.append(f"r{seed}: bounds {r.lower_bound}-{r.upper_bound} miss {full.lower_bound}")
            if not is_k_club(g, s, k) or len(s) != r.lower_bound:
                issues.append(f"r{seed}: node-limited witness invalid")
    report(4, "solver results verify; optimal means gap 0; timeouts give valid bounds", not issues,
           f"{runs} runs, {len(issues)} problems" + (f"; {issues[0]}" if issues else ""))


def test_c5_generator_statistics():
    stats = {}
    for ndv in ("min", "max"):
        gs = [generate_connected(preset(100, 0.1, ndv, s)) for s in range(200)]
        stats[ndv] = (fmean(density(g) for g in gs), fmean(degree_variance(g) for g in gs))
    ok = (abs(stats["min"][0] - 0.1) <= 0.01 and abs(stats["max"][0] - 0.1) <= 0.01
          and stats["max"][1] > stats["min"][1])
    report(5, "generator density and degree variance", ok,
           f"mean density min={stats['min'][0]:.4f} max={stats['max'][0]:.4f} (target 0.1 +/- 0.01); "
           f"mean degree variance min={stats['min'][1]:.2f} max={stats['max'][1]:.2f}")


def _mean_omega3(d, samples=10):
    vals = []
    for s in range(samples):
        g = generate_connected(preset(100, d, "min", s))
        rec, _ = run_instance(g, f"d{d}-{s}", 3, "paths", "internal", 600.0)
        assert rec.solved, f"sample {s} at D={d} unsolved"
        vals.append(rec.omega)
    return fmean(vals), vals


def test_c6_random_club_numbers():
    m1, v1 = _mean_omega3(0.035)
    m2, v2 = _mean_omega3(0.10)
    ok = abs(m1 - 24) <= 3 and abs(m2 - 82.8) <= 6
    report(6, "mean omega_3 on random graphs (n=100, min NDV, seeds 0-9)", ok,
           f"D=0.035: {m1:.1f} (target 24 +/- 3, samples {v1}); "
           f"D=0.10: {m2:.1f} (target 82.8 +/- 6, samples {v2})")


def test_c7_nonhereditary_witness():
    g = cycle_graph(5)
    s, sub = frozenset(range(1, 6)), frozenset({1, 2, 3, 4})
    ok = sub < s and is_k_club(g, s, 2) and not is_k_club(g, sub, 2)
    report(7, "nonhereditary witness", ok, "C5: all five nodes form a 2-club, nodes 1-4 do not")


def test_c8_engine_vs_enumeration():
    rnd = random.Random(88)
    mismatches, unsat, count = [], 0, 500
    for t in range(count):
        nv = rnd.randint(1, 18)
        soft = rnd.sample(range(1, nv + 1), rnd.randint(0, nv))
        hard = []
        for _ in range(rnd.randint(0, 3 * nv)):
            vs = rnd.sample(range(1, nv + 1), rnd.randint(1, min(4, nv)))
            hard.append(tuple(v if rnd.random() < 0.4 else -v for v in vs))
        f = WcnfFormula(nv, tuple(hard), tuple(soft))
        want = maxsat_bruteforce(f)
        try:
            r = solve_internal(f)
            got = r.lower_bound if r.status is Status.OPTIMAL else ("not optimal", r.status)
        except HardUnsatisfiable:
            got = None
        unsat += want is None
        if got != want:
            mismatches.append((t, nv, got, want))
    report(8, "internal engine equals exhaustive enumeration", not mismatches,
           f"{count} formulas with <= 18 vars ({unsat} hard-unsat), {len(mismatches)} mismatches"
           + (f"; first {mismatches[0]}" if mismatches else ""))


def test_c9_round_trips():
    problems = []
    rnd = random.Random(9)
    for _ in range(200):
        g = generate_connected(preset(rnd.randint(5, 25), 0.3, rnd.choice(["min", "max"]),
                                      rnd.randint(0, 10**6)))
        e = encode(g, rnd.randint(1, 4), rnd.choice(["paths", "reach"]))
        for style in ("classic", "2022"):
            if parse_wcnf(write_wcnf(e.formula, style)) != e.formula:
                problems.append(f"{style} round trip differs")
    f = encode(cycle_graph(6), 2, "paths").formula
    model = extend_assignment(encode(cycle_graph(6), 2, "paths"), {1, 2, 3})
    signed = "s OPTIMUM FOUND\no 3\nv " + " ".join(map(str, model)) + " 0\n"
    binary = "s OPTIMUM FOUND\no 3\nv " + "".join("1" if x > 0 else "0" for x in model) + "\n"
    for text in (signed, binary):
        status, got, cost = parse_solver_output(text, f)
        if got != model or cost != 3:
            problems.append("v-line parse mismatch")
    corrupted = [abs(x) for x in model]  # all nodes selected: not a 2-club of C6
    if violated_hard(f, corrupted) is None:
        problems.append("corrupted model satisfies hard clauses")
    try:
        parse_solver_output("s OPTIMUM FOUND\nv " + " ".join(map(str, corrupted)) + "\n", f)
        problems.append("corrupted assignment accepted")
    except SolverOutputError:
        pass
    report(9, "WCNF and solver-output round trips", not problems,
           "400 WCNF round trips, signed and 0/1 v-lines, corrupted model rejected"
           if not problems else "; ".join(problems))


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
            except Exception as exc:  # keep going; report the crash as a failure
                failed += 1
                print(f"[FAIL] {name}: {exc!r}")
    print(f"\n{failed} criteria failed")
    sys.exit(1 if failed else 0)
