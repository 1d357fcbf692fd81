"""Clauses, partial MAX-SAT formulas, the WCNF format and solver output.

Literals are DIMACS-style signed integers (``3`` is x3, ``-3`` its
negation). Assignments are pysat-style models: a list whose entry
``v - 1`` is ``v`` when variable ``v`` is true and ``-v`` when false.
Every soft clause is a positive unit of weight 1, so a formula stores its
soft part as the list of soft variables.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union


class ClauseError(ValueError):
    pass


def clause(lits: Iterable[int]) -> tuple[int, ...]:
    """Validated clause: no zero literal, no repeats, no complementary pair."""
    out = tuple(lits)
    seen = set()
    for lit in out:
        if lit == 0:
            raise ClauseError("literal 0 is not a variable")
        if lit in seen:
            raise ClauseError(f"duplicate literal {lit} in clause {out}")
        if -lit in seen:
            raise ClauseError(f"complementary literals {lit}/{-lit} in clause {out}")
        seen.add(lit)
    return out


# --- variable roles -------------------------------------------------------

class NodeVar(NamedTuple):
    node: int


class PathAux(NamedTuple):
    """Conjunction of the node variables of a path's intermediate nodes."""

    nodes: frozenset


class ReachVar(NamedTuple):
    i: int
    j: int
    length: int


Role = Union[NodeVar, PathAux, ReachVar]


class VarMap:
    """Bijection between variable indices and their roles.

    Node variables ``x_1..x_n`` always occupy indices ``1..n``.
    """

    def __init__(self, n: int):
        self.n = n
        self._roles: list[Role] = [NodeVar(i) for i in range(1, n + 1)]
        self._index: dict[Role, int] = {r: v for v, r in enumerate(self._roles, start=1)}

    def __len__(self) -> int:
        return len(self._roles)

    @property
    def num_vars(self) -> int:
        return len(self._roles)

    def fresh_var(self, role: Role) -> int:
        """Index of ``role``, allocating ``num_vars + 1`` on first use."""
        if isinstance(role, PathAux) and not isinstance(role.nodes, frozenset):
            role = PathAux(frozenset(role.nodes))
        v = self._index.get(role)
        if v is None:
            if isinstance(role, NodeVar):
                raise KeyError(f"node {role.node} outside 1..{self.n}")
            self._roles.append(role)
            v = len(self._roles)
            self._index[role] = v
        return v

    def lookup(self, role: Role) -> int | None:
        if isinstance(role, PathAux) and not isinstance(role.nodes, frozenset):
            role = PathAux(frozenset(role.nodes))
        return self._index.get(role)

    def role(self, v: int) -> Role:
        if not 1 <= v <= len(self._roles):
            raise KeyError(f"variable {v} not registered")
        return self._roles[v - 1]

    def roles(self):
        return enumerate(self._roles, start=1)

    def count(self, kind: type) -> int:
        return sum(isinstance(r, kind) for r in self._roles)

    # sidecar text: "x <i> <var>", "y <var> <nodes...>", "v <var> <i> <j> <l>"
    def dumps(self) -> str:
        lines = []
        for v, r in self.roles():
            if isinstance(r, NodeVar):
                lines.append(f"x {r.node} {v}")
            elif isinstance(r, PathAux):
                lines.append(f"y {v} " + " ".join(map(str, sorted(r.nodes))))
            else:
                lines.append(f"v {v} {r.i} {r.j} {r.length}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "VarMap":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            toks = line.split()
            if not toks or toks[0] == "c":
                continue
            try:
                nums = list(map(int, toks[1:]))
                if toks[0] == "x":
                    entries.append((nums[1], NodeVar(nums[0])))
                elif toks[0] == "y":
                    entries.append((nums[0], PathAux(frozenset(nums[1:]))))
                elif toks[0] == "v":
                    entries.append((nums[0], ReachVar(nums[1], nums[2], nums[3])))
                else:
                    raise ValueError(toks[0])
            except (ValueError, IndexError):
                raise ValueError(f"varmap line {lineno}: cannot parse {line!r}") from None
        entries.sort()
        n = sum(isinstance(r, NodeVar) for _, r in entries)
        vm = cls(n)
        for v, r in entries:
            if isinstance(r, NodeVar):
                if r.node != v:
                    raise ValueError(f"node variable x{r.node} must have index {r.node}")
                continue
            if vm.fresh_var(r) != v:
                raise ValueError(f"varmap indices are not contiguous at {v}")
        return vm


# --- formulas ------------------------------------------------------------

@dataclass(frozen=True)
class WcnfFormula:
    """Partial MAX-SAT instance with weight-1 positive unit soft clauses."""

    num_vars: int
    hard: tuple[tuple[int, ...], ...]
    soft: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.soft)) != len(self.soft):
            raise ClauseError("soft clauses must be pairwise distinct")
        for v in self.soft:
            if not 1 <= v <= self.num_vars:
                raise ClauseError(f"soft clause {{{v}}} is not a positive literal over 1..{self.num_vars}")
        for c in self.hard:
            for lit in c:
                if not 1 <= abs(lit) <= self.num_vars:
                    raise ClauseError(f"literal {lit} outside 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.hard) + len(self.soft)

    @property
    def top(self) -> int:
        return len(self.soft) + 1


class FormulaBuilder:
    """Accumulates hard clauses, dropping exact repeats (as literal sets)."""

    def __init__(self, max_clauses: int | None = None):
        self.hard: list[tuple[int, ...]] = []
        self._seen: set[frozenset[int]] = set()
        self.max_clauses = max_clauses
        self.extra = 0  # clauses counted against the cap but held elsewhere

    def add(self, lits: Iterable[int]) -> None:
        c = clause(lits)
        key = frozenset(c)
        if key in self._seen:
            return
        self._seen.add(key)
        self.hard.append(c)
        if self.max_clauses is not None and len(self.hard) + self.extra > self.max_clauses:
            raise EncodingTooLarge(self.max_clauses)

    def __len__(self) -> int:
        return len(self.hard)

    def build(self, num_vars: int, soft: Sequence[int]) -> WcnfFormula:
        return WcnfFormula(num_vars, tuple(self.hard), tuple(soft))


class EncodingTooLarge(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"encoding exceeds the clause cap of {cap}")


def satisfies(c: Sequence[int], model: Sequence[int]) -> bool:
    return any(model[abs(lit) - 1] == lit for lit in c)


def violated_hard(f: WcnfFormula, model: Sequence[int]) -> tuple[int, ...] | None:
    """First hard clause falsified by ``model``, or ``None``."""
    _check_total(f, model)
    for c in f.hard:
        if not satisfies(c, model):
            return c
    return None


def _check_total(f: WcnfFormula, model: Sequence[int]) -> None:
    if len(model) != f.num_vars:
        raise ValueError(f"assignment covers {len(model)} variables, formula has {f.num_vars}")
    for v, lit in enumerate(model, start=1):
        if abs(lit) != v:
            raise ValueError(f"assignment entry {v} is {lit}, expected +/-{v}")


def count_satisfied_soft(f: WcnfFormula, model: Sequence[int]) -> int:
    """Number of soft units ``{x_v}`` with ``x_v`` true."""
    _check_total(f, model)
    return sum(1 for v in f.soft if model[v - 1] > 0)


def model_from_true(num_vars: int, true_vars: Iterable[int]) -> list[int]:
    model = [-v for v in range(1, num_vars + 1)]
    for v in true_vars:
        model[v - 1] = v
    return model


# --- WCNF text -----------------------------------------------------------

def write_wcnf(f: WcnfFormula, style: str = "classic") -> str:
    """Render ``f`` as WCNF.

    ``classic`` writes a ``p wcnf <vars> <clauses> <top>`` header with
    ``top = |soft| + 1`` marking hard clauses; ``2022`` writes the
    header-less format with ``h`` for hard clauses.
    """
    out = []
    if style == "classic":
        top = f.top
        out.append(f"p wcnf {f.num_vars} {f.num_clauses} {top}")
        out.extend(f"1 {v} 0" for v in f.soft)
        out.extend(f"{top} {' '.join(map(str, c))} 0" for c in f.hard)
    elif style == "2022":
        out.append(f"c vars {f.num_vars}")
        out.extend(f"1 {v} 0" for v in f.soft)
        out.extend(f"h {' '.join(map(str, c))} 0" for c in f.hard)
    else:
        raise ValueError(f"unknown WCNF style {style!r}")
    return "\n".join(out) + "\n"


class WcnfParseError(ValueError):
    pass


def parse_wcnf(text: str | bytes) -> WcnfFormula:
    """Read classic or 2022-style WCNF restricted to weight-1 positive unit softs."""
    if isinstance(text, bytes):
        text = text.decode()
    num_vars = None
    declared = None
    top = None
    hard: list[tuple[int, ...]] = []
    soft: list[int] = []
    max_var = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if not toks:
            continue
        if toks[0] == "c":
            if len(toks) == 3 and toks[1] == "vars":
                num_vars = int(toks[2])
            continue
        if toks[0] == "p":
            if len(toks) != 5 or toks[1] != "wcnf":
                raise WcnfParseError(f"line {lineno}: expected 'p wcnf <vars> <clauses> <top>'")
            num_vars, declared, top = int(toks[2]), int(toks[3]), int(toks[4])
            continue
        if toks[-1] != "0":
            raise WcnfParseError(f"line {lineno}: clause not terminated by 0")
        try:
            lits = [int(t) for t in toks[1:-1]]
        except ValueError:
            raise WcnfParseError(f"line {lineno}: bad literal") from None
        if lits:
            max_var = max(max_var, max(abs(x) for x in lits))
        if toks[0] == "h" or (top is not None and toks[0] == str(top)):
            try:
                hard.append(clause(lits))
            except ClauseError as exc:
                raise WcnfParseError(f"line {lineno}: {exc}") from None
        elif toks[0] == "1" and len(lits) == 1 and lits[0] > 0:
            soft.append(lits[0])
        else:
            raise WcnfParseError(f"line {lineno}: only weight-1 positive unit soft clauses are supported")
    if num_vars is None:
        num_vars = max_var
    if declared is not None and declared != len(hard) + len(soft):
        raise WcnfParseError(f"header declares {declared} clauses, found {len(hard) + len(soft)}")
    return WcnfFormula(num_vars, tuple(hard), tuple(soft))


# --- solver output -------------------------------------------------------

class SolverStatus(str, enum.Enum):
    OPTIMUM = "OPTIMUM FOUND"
    SATISFIABLE = "SATISFIABLE"
    UNSATISFIABLE = "UNSATISFIABLE"
    UNKNOWN = "UNKNOWN"


class SolverOutputError(ValueError):
    """Solver output is malformed or contradicts the formula."""


_BINARY = re.compile(r"^[01]+$")


def parse_solver_output(text: str | bytes, f: WcnfFormula,
                        require_status: bool = True) -> tuple[SolverStatus, list[int] | None, int | None]:
    """Read MAX-SAT evaluation output.

    Returns ``(status, model, cost)`` where ``cost`` is the last ``o``
    value seen. Both v-line styles are accepted: signed literals
    (``v 1 -2 3 0``, possibly over several lines) and a 0/1 string
    (``v 101``). Variables that occur in no clause may be omitted by the
    solver and default to false; any other gap is an error, as is a model
    that falsifies a hard clause.
    """
    if isinstance(text, bytes):
        text = text.decode(errors="replace")
    status = None
    cost = None
    signed: dict[int, bool] = {}
    binary: str | None = None
    saw_v = False
    for line in text.splitlines():
        toks = line.split()
        if not toks:
            continue
        if toks[0] == "s":
            tag = " ".join(toks[1:])
            try:
                status = SolverStatus(tag)
            except ValueError:
                raise SolverOutputError(f"unknown status line {line!r}") from None
        elif toks[0] == "o" and len(toks) >= 2:
            try:
                cost = int(toks[1])
            except ValueError:
                raise SolverOutputError(f"bad cost line {line!r}") from None
        elif toks[0] == "v":
            saw_v = True
            body = toks[1:]
            if len(body) == 1 and _BINARY.match(body[0]) and len(body[0]) == f.num_vars:
                binary = body[0]
                continue
            for tok in body:
                try:
                    lit = int(tok)
                except ValueError:
                    raise SolverOutputError(f"bad literal {tok!r} in v-line") from None
                if lit == 0:
                    continue
                if abs(lit) > f.num_vars:
                    raise SolverOutputError(f"v-line mentions variable {abs(lit)} > {f.num_vars}")
                signed[abs(lit)] = lit > 0
    if status is None:
        if require_status:
            raise SolverOutputError("missing 's' status line")
        status = SolverStatus.SATISFIABLE if saw_v else SolverStatus.UNKNOWN
    if not saw_v:
        if status in (SolverStatus.OPTIMUM, SolverStatus.SATISFIABLE):
            raise SolverOutputError(f"status {status.value} without an assignment")
        return status, None, cost

    if binary is not None:
        if signed:
            raise SolverOutputError("mixed binary and signed v-lines")
        model = [v if ch == "1" else -v for v, ch in enumerate(binary, start=1)]
    else:
        used = {abs(lit) for c in f.hard for lit in c} | set(f.soft)
        missing = [v for v in used if v not in signed]
        if missing:
            raise SolverOutputError(
                f"assignment length mismatch: {len(missing)} used variables missing (e.g. x{min(missing)})")
        model = [v if signed.get(v, False) else -v for v in range(1, f.num_vars + 1)]
    bad = violated_hard(f, model)
    if bad is not None:
        raise SolverOutputError(f"solver assignment falsifies hard clause {bad}")
    return status, model, cost
