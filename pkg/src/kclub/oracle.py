"""Brute-force ground truth for small graphs.

Subsets are scanned from the largest cardinality down, so the first hit is
a maximum. No pruning: k-clubs are not closed under taking subsets, so
discarding the subsets of a rejected set would be unsound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .cnf import WcnfFormula
from .graph import Graph, is_clique, is_k_club

MAX_ORACLE_NODES = 24
MAX_ENUM_VARS = 22


@dataclass(frozen=True)
class OracleResult:
    size: int
    witness: frozenset[int]


def _guard(g: Graph) -> None:
    if g.n > MAX_ORACLE_NODES:
        raise ValueError(f"brute force limited to n <= {MAX_ORACLE_NODES}, got n={g.n}")


def max_k_club_bruteforce(g: Graph, k: int, size_cap: int | None = None) -> OracleResult:
    """Maximum k-club by exhaustive enumeration.

    ``size_cap`` bounds the largest cardinality tried, so the result is the
    best k-club of size at most ``size_cap``.
    """
    _guard(g)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    top = g.n if size_cap is None else min(size_cap, g.n)
    for size in range(top, 0, -1):
        for combo in combinations(g.nodes, size):
            if is_k_club(g, combo, k):
                return OracleResult(size, frozenset(combo))
    return OracleResult(0, frozenset())


def max_clique_bruteforce(g: Graph) -> OracleResult:
    _guard(g)
    for size in range(g.n, 0, -1):
        for combo in combinations(g.nodes, size):
            if is_clique(g, combo):
                return OracleResult(size, frozenset(combo))
    return OracleResult(0, frozenset())


def maxsat_bruteforce(f: WcnfFormula) -> int | None:
    """Most soft clauses satisfiable together with all hard ones.

    Evaluates all ``2**num_vars`` assignments at once (bit ``v-1`` of an
    index is the value of ``x_v``); ``None`` means the hard part is
    unsatisfiable.
    """
    if f.num_vars > MAX_ENUM_VARS:
        raise ValueError(f"enumeration limited to {MAX_ENUM_VARS} variables, got {f.num_vars}")
    idx = np.arange(1 << f.num_vars, dtype=np.int64)
    bit = [None] + [((idx >> (v - 1)) & 1).astype(bool) for v in range(1, f.num_vars + 1)]
    ok = np.ones(idx.shape, dtype=bool)
    for c in f.hard:
        sat = np.zeros(idx.shape, dtype=bool)
        for lit in c:
            sat |= bit[lit] if lit > 0 else ~bit[-lit]
        ok &= sat
    if not ok.any():
        return None
    score = np.zeros(idx.shape, dtype=np.int64)
    for v in f.soft:
        score += bit[v]
    return int(score[ok].max())
