import random
import time

import pytest

from kclub.cnf import WcnfFormula, count_satisfied_soft, violated_hard
from kclub.encode import encode, extend_assignment, greedy_seed
from kclub.graph import cycle_graph
from kclub.maxsat import (BACKEND, ExternalSolverError, HardUnsatisfiable, SolveBudget, SolveResult,
                          Status, available_backends, optimality_gap, solve_external, solve_internal)
from kclub.oracle import max_k_club_bruteforce, maxsat_bruteforce
from kclub.randgen import generate_connected, preset

from conftest import HAVE_RC2, RC2, random_graph

BACKENDS = available_backends()


def random_formula(rnd, max_vars=12):
    nv = rnd.randint(1, max_vars)
    soft = rnd.sample(range(1, nv + 1), rnd.randint(0, nv))
    hard = []
    for _ in range(rnd.randint(0, 3 * nv)):
        vs = rnd.sample(range(1, nv + 1), rnd.randint(1, min(4, nv)))
        hard.append(tuple(v if rnd.random() < 0.4 else -v for v in vs))
    return WcnfFormula(nv, tuple(hard), tuple(soft))


def test_budget_and_result_invariants():
    with pytest.raises(ValueError):
        SolveBudget(0)
    with pytest.raises(ValueError):
        SolveBudget(1, node_limit=-1)
    assert SolveBudget().time_limit == 3600
    with pytest.raises(AssertionError):
        SolveResult(Status.FEASIBLE, None, 5, 4, 0.0)
    with pytest.raises(AssertionError):
        SolveResult(Status.OPTIMAL, [1], 1, 2, 0.0)


def test_gap_examples():
    assert optimality_gap(SolveResult(Status.OPTIMAL, [1], 50, 50, 0.0)) == 0
    assert optimality_gap(SolveResult(Status.FEASIBLE, None, 93, 100, 0.0)) == pytest.approx(0.07)
    assert optimality_gap(SolveResult(Status.UNKNOWN, None, 0, 10, 0.0)) == 1.0
    with pytest.raises(ValueError):
        optimality_gap(SolveResult(Status.UNKNOWN, None, 0, 0, 0.0))


@pytest.mark.parametrize("backend", BACKENDS)
def test_unconstrained(backend):
    r = solve_internal(WcnfFormula(3, (), (1, 2, 3)), backend=backend)
    assert r.status is Status.OPTIMAL and r.lower_bound == 3 and r.gap == 0


@pytest.mark.parametrize("backend", BACKENDS)
def test_c5_club_number(backend):
    # C5 has diameter 2, so the whole cycle is a 2-club
    assert max_k_club_bruteforce(cycle_graph(5), 2).size == 5
    for method in ("paths", "reach"):
        r = solve_internal(encode(cycle_graph(5), 2, method).formula, backend=backend)
        assert r.status is Status.OPTIMAL and r.lower_bound == 5


@pytest.mark.parametrize("backend", BACKENDS)
def test_hard_unsat_reported(backend):
    f = WcnfFormula(2, ((1,), (-1, 2), (-2,)), (1, 2))
    with pytest.raises(HardUnsatisfiable):
        solve_internal(f, backend=backend)
    with pytest.raises(HardUnsatisfiable):
        solve_internal(WcnfFormula(1, ((1,), (-1,)), (1,)), backend=backend)


@pytest.mark.parametrize("backend", BACKENDS)
def test_matches_enumeration(backend):
    rnd = random.Random(2024)
    for _ in range(300):
        f = random_formula(rnd)
        want = maxsat_bruteforce(f)
        if want is None:
            with pytest.raises(HardUnsatisfiable):
                solve_internal(f, backend=backend)
            continue
        r = solve_internal(f, backend=backend)
        assert r.status is Status.OPTIMAL and r.lower_bound == want
        assert violated_hard(f, r.best_assignment) is None
        assert count_satisfied_soft(f, r.best_assignment) == r.lower_bound


def test_backends_identical():
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    rnd = random.Random(3)
    cases = [random_formula(rnd, 16) for _ in range(100)]
    for seed, (d, k, method) in enumerate([(0.035, 3, "paths"), (0.1, 2, "paths"), (0.05, 3, "reach")]):
        cases.append(encode(generate_connected(preset(100, d, "min", seed)), k, method).formula)
    for f in cases:
        for limit in (None, 25):
            out = []
            for b in BACKENDS:
                try:
                    r = solve_internal(f, SolveBudget(600, node_limit=limit), backend=b)
                except HardUnsatisfiable:
                    out.append("unsat")
                    continue
                out.append((r.status, r.lower_bound, r.upper_bound, r.nodes, r.conflicts,
                            r.best_assignment))
            assert out[0] == out[1]


def test_default_backend():
    assert BACKEND in BACKENDS
    with pytest.raises(ValueError):
        solve_internal(WcnfFormula(1, (), (1,)), backend="fortran")


@pytest.mark.parametrize("backend", BACKENDS)
def test_initial_model(backend):
    g = random_graph(12, 0.3, random.Random(4))
    e = encode(g, 2, "paths")
    seed = extend_assignment(e, greedy_seed(g, 2))
    r = solve_internal(e.formula, initial=seed, backend=backend)
    assert r.lower_bound == max_k_club_bruteforce(g, 2).size
    with pytest.raises(ValueError):
        solve_internal(e.formula, initial=[v for v in range(1, e.num_vars + 1)], backend=backend)


@pytest.mark.parametrize("backend", BACKENDS)
def test_budget_exhaustion_gives_valid_bounds(backend):
    g = generate_connected(preset(100, 0.1, "max", 3))
    e = encode(g, 2, "paths")
    full = solve_internal(e.formula, backend=backend)
    assert full.status is Status.OPTIMAL
    for limit in (0, 5, 50):
        r = solve_internal(e.formula, SolveBudget(600, node_limit=limit), backend=backend)
        assert r.status in (Status.FEASIBLE, Status.UNKNOWN)
        assert r.lower_bound <= full.lower_bound <= r.upper_bound <= len(e.formula.soft)
        if r.best_assignment is not None:
            assert violated_hard(e.formula, r.best_assignment) is None
    seed = extend_assignment(e, greedy_seed(g, 2))
    r = solve_internal(e.formula, SolveBudget(600, node_limit=0), initial=seed, backend=backend)
    assert r.status is Status.FEASIBLE and r.lower_bound == len(greedy_seed(g, 2))


def test_time_limit_respected():
    e = encode(generate_connected(preset(100, 0.15, "max", 1)), 2, "paths")
    t0 = time.monotonic()
    r = solve_internal(e.formula, SolveBudget(0.05), backend="python")
    assert time.monotonic() - t0 < 5
    assert r.status is not Status.OPTIMAL or r.gap == 0


# --- external adapter -------------------------------------------------------

def test_external_all_true(fake_solver):
    cmd = fake_solver('print("s OPTIMUM FOUND"); print("o 0"); print("v 1 2 3 4 0")')
    r = solve_external(WcnfFormula(4, (), (1, 2, 3, 4)), cmd)
    assert r.status is Status.OPTIMAL and r.lower_bound == 4 and r.reported_cost == 0


def test_external_reads_the_instance(fake_solver):
    cmd = fake_solver(
        "text = open(path).read()\n"
        "assert text.startswith('p wcnf 2 3 3')\n"
        "print('s OPTIMUM FOUND'); print('o 1'); print('v 10')")
    r = solve_external(WcnfFormula(2, ((-1, -2),), (1, 2)), cmd)
    assert r.lower_bound == 1 and r.best_assignment == [1, -2]


def test_external_bad_model_rejected(fake_solver):
    cmd = fake_solver('print("s OPTIMUM FOUND"); print("v 1 2 0")')
    with pytest.raises(ExternalSolverError, match="hard"):
        solve_external(WcnfFormula(2, ((-1, -2),), (1, 2)), cmd)


def test_external_failures(fake_solver):
    f = WcnfFormula(2, (), (1, 2))
    with pytest.raises(ExternalSolverError):
        solve_external(f, fake_solver("print('garbage line')"))
    with pytest.raises(ExternalSolverError):
        solve_external(f, fake_solver("sys.exit(3)"))
    with pytest.raises(ExternalSolverError):
        solve_external(f, ["/nonexistent/solver"])
    with pytest.raises(HardUnsatisfiable):
        solve_external(f, fake_solver("print('s UNSATISFIABLE')"))
    with pytest.raises(ValueError):
        solve_external(f, [])


def test_external_timeout_keeps_partial_model(fake_solver):
    cmd = fake_solver(
        "import time\n"
        "print('o 1'); print('v 1 -2', flush=True)\n"
        "time.sleep(60)")
    t0 = time.monotonic()
    r = solve_external(WcnfFormula(2, ((-1, -2),), (1, 2)), cmd, SolveBudget(0.5), grace=0.5)
    assert time.monotonic() - t0 < 10
    assert r.status is Status.FEASIBLE and r.lower_bound == 1 and r.upper_bound == 2
    assert r.extra["timed_out"]


def test_external_timeout_ignoring_sigterm(fake_solver):
    cmd = fake_solver(
        "import signal, time\n"
        "signal.signal(signal.SIGTERM, signal.SIG_IGN)\n"
        "print('c working', flush=True)\n"
        "time.sleep(60)")
    t0 = time.monotonic()
    r = solve_external(WcnfFormula(2, (), (1, 2)), cmd, SolveBudget(0.3), grace=0.3)
    assert time.monotonic() - t0 < 10
    assert r.status is Status.UNKNOWN and r.best_assignment is None and r.gap == 1.0


@pytest.mark.skipif(not HAVE_RC2, reason="rc2.py not on PATH")
def test_external_rc2_agrees():
    rnd = random.Random(11)
    for _ in range(10):
        g = random_graph(rnd.randint(6, 12), 0.35, rnd)
        for method in ("paths", "reach"):
            f = encode(g, 3, method).formula
            r = solve_external(f, RC2, SolveBudget(60))
            assert r.status is Status.OPTIMAL
            assert r.lower_bound == solve_internal(f).lower_bound
