"""Partial MAX-SAT solving for unit-weight positive soft clauses.

``solve_internal`` runs the built-in branch-and-bound engine (compiled
kernel when available, pure Python otherwise); ``solve_external`` drives a
MAX-SAT evaluation style solver binary through a WCNF file.
"""

from .engine import (BACKEND, SolveBudget, SolveResult, Status, HardUnsatisfiable,
                     ExternalSolverError, available_backends, optimality_gap,
                     solve_external, solve_internal)

__all__ = [
    "BACKEND", "SolveBudget", "SolveResult", "Status", "HardUnsatisfiable",
    "ExternalSolverError", "available_backends", "optimality_gap", "solve_external",
    "solve_internal",
]
