"""Partial MAX-SAT encodings of the maximum k-club problem.

Both encodings use one soft unit ``{x_i}`` per node and differ in the hard
part:

``paths``
    For each non-adjacent pair ``i < j`` one clause
    ``{-x_i, -x_j} + {one literal per simple i-j path of length 2..k}``.
    A path with a single intermediate node ``r`` contributes ``x_r``; longer
    ones contribute an auxiliary ``y`` equivalent to the conjunction of the
    intermediate node variables. ``y`` is keyed by the *set* of
    intermediates and defined once.

``reach``
    For each non-adjacent pair ``i < j`` the clause
    ``{-x_i, -x_j, v^2_ij, ..., v^k_ij}`` where ``v^l_ij`` is defined
    recursively: ``v^2_ij <-> x_i & x_j & OR_r x_r`` over common neighbours
    ``r``, and ``v^l_ij <-> x_i & OR_r v^{l-1}_rj`` over neighbours
    ``r != j`` of ``i``. Definitions are emitted for every ``v`` reachable
    from a top clause, adjacent pairs included; leaving any of them
    undefined would let the solver set it true for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cnf import (FormulaBuilder, NodeVar, PathAux, ReachVar, VarMap, WcnfFormula,
                  model_from_true, violated_hard)
from .graph import Graph, bfs_distances, is_k_club

DEFAULT_MAX_CLAUSES = 50_000_000
METHODS = ("paths", "reach")


class InvalidAssignment(ValueError):
    pass


@dataclass(frozen=True)
class Encoding:
    formula: WcnfFormula
    varmap: VarMap
    graph: Graph
    k: int
    method: str

    @property
    def num_vars(self) -> int:
        return self.formula.num_vars

    @property
    def num_clauses(self) -> int:
        return self.formula.num_clauses


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")


def _non_adjacent_pairs(g: Graph):
    adj = g.adj
    for i in range(1, g.n):
        ai = adj[i]
        for j in range(i + 1, g.n + 1):
            if j not in ai:
                yield i, j


def _encode_k1(g: Graph, max_clauses: int | None, method: str) -> Encoding:
    vm = VarMap(g.n)
    fb = FormulaBuilder(max_clauses)
    fb.extra = g.n
    for i, j in _non_adjacent_pairs(g):
        fb.add((-i, -j))
    return Encoding(fb.build(vm.num_vars, range(1, g.n + 1)), vm, g, 1, method)


def encode_paths(g: Graph, k: int, max_clauses: int | None = DEFAULT_MAX_CLAUSES) -> Encoding:
    """Path-enumeration encoding; size grows like ``n^(k-1)``.

    Raises :class:`~kclub.cnf.EncodingTooLarge` once more than
    ``max_clauses`` clauses (soft included) would be produced.
    """
    _check_k(k)
    if k == 1:
        return _encode_k1(g, max_clauses, "paths")
    vm = VarMap(g.n)
    fb = FormulaBuilder(max_clauses)
    fb.extra = g.n
    adj = [sorted(s) for s in g.adj]
    dist_to: dict[int, dict[int, int | None]] = {}

    for i, j in _non_adjacent_pairs(g):
        dj = dist_to.get(j)
        if dj is None:
            dj = dist_to[j] = bfs_distances(g, j)
        dij = dj[i]
        if dij is None or dij > k:
            fb.add((-i, -j))
            continue
        lits: dict[int, None] = {-i: None, -j: None}
        path: list[int] = []
        on_path = {i, j}

        # depth-first over simple paths i -> ... -> j with at most k edges;
        # a node at distance > remaining from j cannot lie on such a path
        def extend(u: int, remaining: int) -> None:
            for w in adj[u]:
                if w == j:
                    if path:
                        lits[_path_literal(vm, fb, path)] = None
                    continue
                if w in on_path:
                    continue
                dw = dj[w]
                if dw is None or dw > remaining - 1:
                    continue
                on_path.add(w)
                path.append(w)
                extend(w, remaining - 1)
                path.pop()
                on_path.discard(w)

        extend(i, k)
        fb.add(lits)
    return Encoding(fb.build(vm.num_vars, range(1, g.n + 1)), vm, g, k, "paths")


def _path_literal(vm: VarMap, fb: FormulaBuilder, inner: Sequence[int]) -> int:
    if len(inner) == 1:
        return inner[0]
    role = PathAux(frozenset(inner))
    y = vm.lookup(role)
    if y is None:
        y = vm.fresh_var(role)
        members = sorted(role.nodes)
        for r in members:
            fb.add((-y, r))
        fb.add([-r for r in members] + [y])
    return y


def encode_reach(g: Graph, k: int, max_clauses: int | None = DEFAULT_MAX_CLAUSES) -> Encoding:
    """Recursive-reachability encoding with ``O(k n^2)`` variables."""
    _check_k(k)
    if k == 1:
        return _encode_k1(g, max_clauses, "reach")
    vm = VarMap(g.n)
    fb = FormulaBuilder(max_clauses)
    fb.extra = g.n
    adj = [sorted(s) for s in g.adj]
    nbrsets = g.adj

    pending: list[ReachVar] = []

    def var(i: int, j: int, length: int) -> int:
        role = ReachVar(i, j, length)
        v = vm.lookup(role)
        if v is None:
            v = vm.fresh_var(role)
            pending.append(role)
        return v

    for i, j in _non_adjacent_pairs(g):
        fb.add([-i, -j] + [var(i, j, length) for length in range(2, k + 1)])

    while pending:
        i, j, length = role = pending.pop()
        v = vm.lookup(role)
        if length == 2:
            common = [r for r in adj[i] if r in nbrsets[j]]
            if not common:
                fb.add((-v,))
                continue
            fb.add((-v, i))
            fb.add((-v, j))
            fb.add([-v] + common)
            for r in common:
                fb.add((-i, -j, v, -r))
        else:
            nbrs = [r for r in adj[i] if r != j]
            if not nbrs:
                fb.add((-v,))
                continue
            prev = [var(r, j, length - 1) for r in nbrs]
            fb.add((-v, i))
            fb.add([-v] + prev)
            for p in prev:
                fb.add((-i, v, -p))
    return Encoding(fb.build(vm.num_vars, range(1, g.n + 1)), vm, g, k, "reach")


def encode(g: Graph, k: int, method: str = "paths",
           max_clauses: int | None = DEFAULT_MAX_CLAUSES) -> Encoding:
    if method == "paths":
        return encode_paths(g, k, max_clauses)
    if method == "reach":
        return encode_reach(g, k, max_clauses)
    raise ValueError(f"unknown encoding method {method!r}; expected one of {METHODS}")


def decode(e: Encoding, model: Sequence[int]) -> frozenset[int]:
    """Nodes whose variable is true; the model must satisfy every hard clause."""
    bad = violated_hard(e.formula, model)
    if bad is not None:
        raise InvalidAssignment(f"assignment falsifies hard clause {bad}")
    return frozenset(i for i in range(1, e.graph.n + 1) if model[i - 1] > 0)


def extend_assignment(e: Encoding, s: Iterable[int]) -> list[int]:
    """Total model selecting exactly ``s`` with every auxiliary at its defined value."""
    s = frozenset(s)
    g = e.graph
    if s and not is_k_club(g, s, e.k):
        raise InvalidAssignment(f"{sorted(s)} is not a {e.k}-club")
    reach = _reach_table(g, s, e.k) if e.method == "reach" and e.k > 1 else None
    true_vars = []
    for v, role in e.varmap.roles():
        if isinstance(role, NodeVar):
            val = role.node in s
        elif isinstance(role, PathAux):
            val = role.nodes <= s
        else:
            val = (role.i, role.j) in reach[role.length]
        if val:
            true_vars.append(v)
    return model_from_true(e.num_vars, true_vars)


def _reach_table(g: Graph, s: frozenset[int], k: int) -> dict[int, set[tuple[int, int]]]:
    # the same recursion the definitional clauses encode, evaluated on s
    table = {2: {(i, j) for i in s for j in s if i != j and any(r in s for r in g.adj[i] & g.adj[j])}}
    for length in range(3, k + 1):
        prev = table[length - 1]
        table[length] = {(i, j) for i in s for j in s if i != j
                         and any(r != j and (r, j) in prev for r in g.adj[i])}
    return table


def greedy_seed(g: Graph, k: int) -> frozenset[int]:
    """Largest closed ball of radius ``k // 2``, which is always a k-club.

    Shortest paths from the centre stay inside the ball, so any two
    members are joined inside it by at most ``2 * (k // 2) <= k`` edges.
    """
    _check_k(k)
    if g.n == 0:
        return frozenset()
    radius = k // 2
    best: frozenset[int] = frozenset([1])
    for c in g.nodes:
        dist = bfs_distances(g, c)
        ball = frozenset(v for v, d in dist.items() if d is not None and d <= radius)
        if len(ball) > len(best):
            best = ball
    if not is_k_club(g, best, k):
        raise AssertionError(f"ball seed {sorted(best)} failed k-club verification")
    return best
