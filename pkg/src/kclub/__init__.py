"""Maximum k-club search via partial MAX-SAT.

A k-club is a vertex set whose induced subgraph has diameter at most k.
The package encodes the maximum k-club problem as partial MAX-SAT (two
encodings, ``paths`` and ``reach``), solves it with a built-in engine or
an external solver, and checks every answer on the graph itself.
"""

from .graph import Graph, diameter, induced_diameter, is_k_club
from .encode import Encoding, decode, encode
from .maxsat import SolveBudget, SolveResult, Status, solve_external, solve_internal

__version__ = "0.1.0"

__all__ = [
    "Graph", "diameter", "induced_diameter", "is_k_club", "Encoding", "decode", "encode",
    "SolveBudget", "SolveResult", "Status", "solve_external", "solve_internal",
]
