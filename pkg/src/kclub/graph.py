"""Simple undirected graphs on nodes ``1..n`` and k-club checks."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    Nodes are the integers ``1..n``. ``adj[i]`` is the neighbour set of node
    ``i``; ``adj[0]`` is an unused empty slot so that indices match labels.
    ``labels`` optionally maps each node back to a label in a parent graph
    (set by :func:`induced_subgraph`).
    """

    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[frozenset[int], ...] = field(repr=False, compare=False)
    labels: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        if n < 0:
            raise ValueError(f"node count must be non-negative, got {n}")
        canon = set()
        nbrs: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside node range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u > v:
                u, v = v, u
            canon.add((u, v))
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, frozenset(canon), tuple(frozenset(s) for s in nbrs),
                   None if labels is None else tuple(labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def degree(self, i: int) -> int:
        return len(self.adj[i])

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj[i]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def _check_node(g: Graph, i: int) -> None:
    if not 1 <= i <= g.n:
        raise ValueError(f"node {i} outside range 1..{g.n}")


def _check_nodeset(g: Graph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    if not s:
        raise ValueError("node set must be nonempty")
    for i in s:
        _check_node(g, i)
    return s


def bfs_distances(g: Graph, source: int, within: frozenset[int] | None = None) -> dict[int, int | None]:
    """Shortest-path distances from ``source``.

    Parameters
    ----------
    g : Graph
    source : int
        Start node, ``1 <= source <= n``.
    within : frozenset of int, optional
        Restrict the search to paths whose nodes all lie in this set (the
        induced subgraph). ``source`` must be a member.

    Returns
    -------
    dict
        Maps every node (every member of ``within`` when given) to its
        distance, or to ``None`` when it is unreachable.
    """
    _check_node(g, source)
    if within is not None and source not in within:
        raise ValueError(f"source {source} not in the restricting set")
    dist: dict[int, int | None] = dict.fromkeys(g.nodes if within is None else within)
    dist[source] = 0
    queue = deque([source])
    adj = g.adj
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if w in dist and dist[w] is None:
                dist[w] = du
                queue.append(w)
    return dist


def eccentricity_within(g: Graph, source: int, members: frozenset[int]) -> float:
    dist = bfs_distances(g, source, members)
    worst = 0
    for d in dist.values():
        if d is None:
            return math.inf
        worst = max(worst, d)
    return worst


def diameter(g: Graph) -> float:
    """Largest pairwise distance; ``math.inf`` for a disconnected graph."""
    if g.n < 1:
        raise ValueError("diameter of the empty graph is undefined")
    return _diameter_of(g, frozenset(g.nodes))


def _diameter_of(g: Graph, members: frozenset[int]) -> float:
    best = 0
    for s in members:
        ecc = eccentricity_within(g, s, members)
        if ecc == math.inf:
            return math.inf
        best = max(best, ecc)
    return best


def induced_diameter(g: Graph, s: Iterable[int]) -> float:
    """Diameter of ``G[S]`` computed without relabelling."""
    return _diameter_of(g, _check_nodeset(g, s))


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph induced by ``s``, relabelled ``1..|s|`` in ascending order.

    The returned graph's ``labels[t - 1]`` is the original label of new
    node ``t``.
    """
    members = sorted(_check_nodeset(g, s))
    index = {v: t for t, v in enumerate(members, start=1)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph.from_edges(len(members), edges, labels=members)


def is_k_club(g: Graph, s: Iterable[int], k: int) -> bool:
    """True iff every pair of ``s`` is joined by a path of at most ``k`` edges inside ``s``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    members = _check_nodeset(g, s)
    adj = g.adj
    for src in members:
        # depth-bounded BFS; early exit once some member stays unreached
        seen = {src}
        frontier = [src]
        for _ in range(k):
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w in members and w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if not nxt:
                break
            frontier = nxt
        if len(seen) != len(members):
            return False
    return True


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    members = list(s)
    adj = g.adj
    return all(members[b] in adj[members[a]]
               for a in range(len(members)) for b in range(a + 1, len(members)))


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return all(d is not None for d in bfs_distances(g, 1).values())


def density(g: Graph) -> float:
    """Edge density ``2m / (n(n-1))``."""
    if g.n < 2:
        raise ValueError(f"density needs at least 2 nodes, got {g.n}")
    return 2.0 * g.m / (g.n * (g.n - 1))


def degree_variance(g: Graph) -> float:
    """Population variance of the degree sequence."""
    if g.n == 0:
        raise ValueError("degree variance of the empty graph is undefined")
    degs = [len(g.adj[i]) for i in g.nodes]
    mean = sum(degs) / g.n
    return sum((d - mean) ** 2 for d in degs) / g.n


# small constructors, mostly for tests and examples

def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a simple cycle needs at least 3 nodes")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(1, j) for j in range(2, leaves + 2)])
