import random

import pytest
from hypothesis import given

from kclub.cnf import WcnfFormula
from kclub.graph import Graph, complete_graph, cycle_graph, diameter, is_k_club, star_graph
from kclub.oracle import MAX_ORACLE_NODES, max_clique_bruteforce, max_k_club_bruteforce, maxsat_bruteforce

from conftest import graphs, random_graph


def test_examples():
    assert max_k_club_bruteforce(cycle_graph(5), 2).size == 5
    assert max_k_club_bruteforce(cycle_graph(5), 1).size == 2
    assert max_k_club_bruteforce(star_graph(6), 2).size == 7
    assert max_k_club_bruteforce(star_graph(6), 1).size == 2
    assert max_clique_bruteforce(complete_graph(4)).size == 4
    assert max_clique_bruteforce(cycle_graph(5)).size == 2
    # C7: the largest 2-club is a vertex with its two neighbours
    assert max_k_club_bruteforce(cycle_graph(7), 2).size == 3


def test_clique_agrees_with_k1():
    rnd = random.Random(10)
    for _ in range(20):
        g = random_graph(10, 0.5, rnd)
        assert max_clique_bruteforce(g).size == max_k_club_bruteforce(g, 1).size


@given(graphs(min_n=1, max_n=8))
def test_monotone_in_k_and_full_iff_small_diameter(g):
    sizes = []
    for k in (1, 2, 3, 4):
        res = max_k_club_bruteforce(g, k)
        assert is_k_club(g, res.witness, k) and len(res.witness) == res.size
        assert (res.size == g.n) == (diameter(g) <= k)
        sizes.append(res.size)
    assert sizes == sorted(sizes)


def test_size_cap_and_guards():
    assert max_k_club_bruteforce(complete_graph(6), 2, size_cap=4).size == 4
    with pytest.raises(ValueError):
        max_k_club_bruteforce(Graph.from_edges(MAX_ORACLE_NODES + 1, []), 2)
    with pytest.raises(ValueError):
        max_k_club_bruteforce(cycle_graph(4), 0)
    assert max_k_club_bruteforce(Graph.from_edges(0, []), 2).size == 0


def test_maxsat_bruteforce():
    assert maxsat_bruteforce(WcnfFormula(3, ((-1, -2),), (1, 2, 3))) == 2
    assert maxsat_bruteforce(WcnfFormula(1, ((1,), (-1,)), (1,))) is None
    with pytest.raises(ValueError):
        maxsat_bruteforce(WcnfFormula(30, (), ()))


def test_maxsat_bruteforce_against_naive_loop():
    from itertools import product
    rnd = random.Random(8)
    for _ in range(60):
        nv = rnd.randint(1, 7)
        hard = tuple(tuple(v if rnd.random() < 0.5 else -v
                           for v in rnd.sample(range(1, nv + 1), rnd.randint(1, min(3, nv))))
                     for _ in range(rnd.randint(0, 10)))
        soft = tuple(rnd.sample(range(1, nv + 1), rnd.randint(0, nv)))
        best = None
        for vals in product([False, True], repeat=nv):
            if all(any(vals[abs(l) - 1] == (l > 0) for l in c) for c in hard):
                score = sum(vals[v - 1] for v in soft)
                best = score if best is None else max(best, score)
        assert maxsat_bruteforce(WcnfFormula(nv, hard, soft)) == best
