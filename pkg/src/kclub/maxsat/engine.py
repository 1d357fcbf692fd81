from __future__ import annotations

import enum
import logging
import os
import signal
import subprocess
import tempfile
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from ..cnf import (SolverOutputError, SolverStatus, WcnfFormula, count_satisfied_soft,
                   parse_solver_output, violated_hard, write_wcnf)
from . import _pykernel

log = logging.getLogger(__name__)

try:
    if os.environ.get("KCLUB_PURE_PYTHON"):
        raise ImportError("compiled kernel disabled by KCLUB_PURE_PYTHON")
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

#: Kernel used when no backend is requested explicitly.
BACKEND = "cython" if _ckernel is not None else "python"

DEFAULT_TIME_LIMIT = 3600.0


def available_backends() -> list[str]:
    return ["cython", "python"] if _ckernel is not None else ["python"]


def _kernel(backend: str | None):
    backend = backend or BACKEND
    if backend == "python":
        return _pykernel
    if backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel not built; run `pip install -e .` or use backend='python'")
        return _ckernel
    raise ValueError(f"unknown backend {backend!r}")


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    UNKNOWN = "unknown"


class HardUnsatisfiable(RuntimeError):
    """The hard clauses admit no model."""


class ExternalSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveBudget:
    time_limit: float = DEFAULT_TIME_LIMIT
    node_limit: int | None = None

    def __post_init__(self):
        if not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if self.node_limit is not None and self.node_limit < 0:
            raise ValueError("node_limit must be non-negative")


@dataclass
class SolveResult:
    status: Status
    best_assignment: list[int] | None
    lower_bound: int
    upper_bound: int
    elapsed: float
    nodes: int = 0
    conflicts: int = 0
    solver: str = "internal"
    reported_cost: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise AssertionError(f"lower bound {self.lower_bound} exceeds upper bound {self.upper_bound}")
        if self.status is Status.OPTIMAL and (self.best_assignment is None
                                              or self.lower_bound != self.upper_bound):
            raise AssertionError("optimal result needs a model and equal bounds")

    @property
    def gap(self) -> float:
        return optimality_gap(self)


def optimality_gap(r: SolveResult) -> float:
    """``(upper bound - best solution size) / upper bound``; 0 when optimal."""
    if r.upper_bound <= 0:
        raise ValueError("optimality gap undefined for a zero upper bound")
    if r.status is Status.OPTIMAL:
        return 0.0
    return (r.upper_bound - r.lower_bound) / r.upper_bound


def _default_order(f: WcnfFormula) -> list[int]:
    occ = Counter(abs(lit) for c in f.hard for lit in c)
    return sorted(f.soft, key=lambda v: (-occ[v], v))


def solve_internal(f: WcnfFormula, budget: SolveBudget = SolveBudget(), *,
                   order: Sequence[int] | None = None,
                   initial: Sequence[int] | None = None,
                   backend: str | None = None) -> SolveResult:
    """Exact branch and bound over the variables of ``f``.

    Parameters
    ----------
    f : WcnfFormula
    budget : SolveBudget
        Wall-clock and decision limits. When either runs out the best model
        found so far is returned with status ``FEASIBLE`` (or ``UNKNOWN``
        if there is none).
    order : sequence of int, optional
        Soft variables in preferred branching order (most promising first).
        Defaults to descending number of hard-clause occurrences.
    initial : model, optional
        A hard-satisfying model used as the first incumbent.
    backend : {"cython", "python"}, optional

    Raises
    ------
    HardUnsatisfiable
        If the search proves the hard clauses unsatisfiable.
    """
    start = time.monotonic()
    kern = _kernel(backend)
    if initial is not None:
        initial = list(initial)
        bad = violated_hard(f, initial)
        if bad is not None:
            raise ValueError(f"initial model falsifies hard clause {bad}")
    deadline = start + budget.time_limit
    node_limit = -1 if budget.node_limit is None else budget.node_limit
    status, model, cost, fixed_false, nodes, conflicts = kern.search(
        f.num_vars, [list(c) for c in f.hard], list(f.soft),
        list(order) if order is not None else _default_order(f),
        initial, deadline, node_limit)
    elapsed = time.monotonic() - start
    name = "internal-python" if kern is _pykernel else "internal-cython"
    nsoft = len(f.soft)
    if status == _pykernel.UNSAT:
        raise HardUnsatisfiable("hard clauses are unsatisfiable")
    if model is not None:
        model = list(model)
        lb = count_satisfied_soft(f, model)
        if lb != nsoft - cost:
            raise AssertionError("kernel cost disagrees with recount")
    else:
        lb = 0
    if status == _pykernel.OPTIMAL:
        return SolveResult(Status.OPTIMAL, model, lb, lb, elapsed, nodes, conflicts, name)
    # facts fixed at the root hold for every model better than the incumbent
    ub = max(lb, nsoft - fixed_false)
    return SolveResult(Status.FEASIBLE if model is not None else Status.UNKNOWN, model, lb, ub,
                       elapsed, nodes, conflicts, name)


def solve_external(f: WcnfFormula, solver_command: Sequence[str],
                   budget: SolveBudget = SolveBudget(), grace: float = 2.0) -> SolveResult:
    """Run ``<command> <wcnf-path>`` and read evaluation-format output.

    The child gets ``budget.time_limit`` seconds, then SIGTERM, then
    SIGKILL after ``grace`` more seconds. Any model the solver prints is
    checked against the hard clauses before it is trusted.
    """
    if not solver_command:
        raise ValueError("empty solver command")
    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="kclub-") as tmp:
        path = os.path.join(tmp, "instance.wcnf")
        with open(path, "w") as fh:
            fh.write(write_wcnf(f))
        try:
            proc = subprocess.Popen([*solver_command, path], stdout=subprocess.PIPE,
                                    stderr=subprocess.PIPE, text=True, start_new_session=True)
        except OSError as exc:
            raise ExternalSolverError(f"cannot start {solver_command[0]!r}: {exc}") from exc
        timed_out = False
        try:
            out, err = proc.communicate(timeout=budget.time_limit)
        except subprocess.TimeoutExpired:
            timed_out = True
            _signal_group(proc, signal.SIGTERM)
            try:
                out, err = proc.communicate(timeout=grace)
            except subprocess.TimeoutExpired:
                _signal_group(proc, signal.SIGKILL)
                out, err = proc.communicate()
        except BaseException:
            _signal_group(proc, signal.SIGKILL)
            proc.wait()
            raise
    elapsed = time.monotonic() - start
    name = os.path.basename(solver_command[0])

    try:
        sstatus, model, cost = parse_solver_output(out, f, require_status=not timed_out)
    except SolverOutputError as exc:
        if timed_out:
            log.warning("discarding unusable output of timed-out solver: %s", exc)
            sstatus, model, cost = SolverStatus.UNKNOWN, None, None
        else:
            raise ExternalSolverError(f"{name}: {exc}") from exc
    if not timed_out and proc.returncode not in (0, 10, 20, 30) and sstatus is SolverStatus.UNKNOWN:
        raise ExternalSolverError(f"{name} exited with code {proc.returncode}: {err.strip()[-500:]}")
    if sstatus is SolverStatus.UNSATISFIABLE:
        raise HardUnsatisfiable(f"{name} reports the hard clauses unsatisfiable")

    nsoft = len(f.soft)
    lb = count_satisfied_soft(f, model) if model is not None else 0
    if cost is not None and model is not None and cost != nsoft - lb:
        log.warning("%s reported cost %d but its model has cost %d", name, cost, nsoft - lb)
    if sstatus is SolverStatus.OPTIMUM and model is not None and not timed_out:
        return SolveResult(Status.OPTIMAL, model, lb, lb, elapsed, solver=name, reported_cost=cost)
    status = Status.FEASIBLE if model is not None else Status.UNKNOWN
    return SolveResult(status, model, lb, nsoft, elapsed, solver=name, reported_cost=cost,
                       extra={"timed_out": timed_out})


def _signal_group(proc: subprocess.Popen, sig: int) -> None:
    try:
        os.killpg(proc.pid, sig)
    except (ProcessLookupError, PermissionError):
        pass

