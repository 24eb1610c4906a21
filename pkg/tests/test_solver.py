import math
import random

import pytest

from oracles import brute_force_genera
from genusforge.embedding import is_orientable, scheme_euler_genus
from genusforge.graphs import (SimpleGraph, TerminalGraph, complete_bipartite, complete_graph, cycle_graph,
                               delete_edge, disjoint_union, one_sum, path_graph)
from genusforge.pools import connected_graphs, random_connected_graph
from genusforge.solver import (ANY, NONORIENTABLE, ORIENTABLE, BudgetExceeded, ProfileCache, SolverBudget,
                               clear_caches, euler_genus, euler_genus_at_most, euler_genus_lower_bound,
                               genus_profile, genus_triple, minimal_scheme, nonorientable_genus,
                               orientable_genus, orientably_simple, set_profile_cache)


def _scheme_space(g: SimpleGraph) -> int:
    rot = math.prod(math.factorial(max(g.degree(v) - 1, 0)) for v in range(g.n))
    return rot * 2 ** max(g.m - g.n + 1, 0)


def _oracle_cases(limit: int):
    return [g for g in connected_graphs(6, 15, min_n=2) if _scheme_space(g) <= limit]


def test_against_brute_force_on_small_atlas():
    cases = _oracle_cases(60_000)
    assert len(cases) > 100
    nonplanar = 0
    for g in cases:
        want = brute_force_genera(g.n, g.edges)
        assert genus_triple(g) == want, g.edges
        nonplanar += want[0] > 0
    assert nonplanar > 0


def test_against_brute_force_without_decomposition():
    rng = random.Random(3)
    checked = 0
    while checked < 40:
        g = random_connected_graph(rng, rng.randint(4, 7), rng.randint(6, 11))
        if _scheme_space(g) > 60_000:
            continue
        assert genus_triple(g, decompose=False) == brute_force_genera(g.n, g.edges)
        checked += 1


@pytest.mark.parametrize("g, expected", [
    (complete_graph(5), (1, 1, 1)),
    (complete_bipartite(3, 3), (1, 1, 1)),
    (complete_graph(3), (0, 0, 1)),
    (path_graph(4), (0, 0, 0)),
    (SimpleGraph(0), (0, 0, 0)),
    (complete_graph(6), (1, 1, 1)),
    (complete_graph(7), (2, 1, 3)),
    (complete_bipartite(4, 4), (2, 1, 2)),
])
def test_known_genera(g, expected):
    assert genus_triple(g) == expected
    assert (euler_genus(g), orientable_genus(g), nonorientable_genus(g)) == expected


def test_one_sum_of_two_k5():
    g = one_sum(complete_graph(5), 0, complete_graph(5), 0)
    assert euler_genus(g) == 2
    assert genus_triple(g) == (2, 2, 2)


def test_disjoint_union_adds():
    g = disjoint_union(complete_graph(5), complete_bipartite(3, 3))
    assert genus_triple(g) == (2, 2, 2)


@pytest.mark.parametrize("g", [complete_graph(5), complete_bipartite(3, 3)])
def test_kuratowski_decisions(g):
    assert euler_genus_at_most(g, 0) is None
    w = euler_genus_at_most(g, 1)
    assert w is not None and scheme_euler_genus(g, w) == 1


def test_k7_needs_an_orientable_surface():
    k7 = complete_graph(7)
    w = euler_genus_at_most(k7, 2)
    assert w is not None and is_orientable(k7, w) and scheme_euler_genus(k7, w) == 2
    assert euler_genus_at_most(k7, 2, mode=NONORIENTABLE) is None
    w3 = euler_genus_at_most(k7, 3, mode=NONORIENTABLE)
    assert not is_orientable(k7, w3) and scheme_euler_genus(k7, w3) == 3


def test_witnesses_realize_their_values():
    rng = random.Random(4)
    for _ in range(60):
        g = random_connected_graph(rng, rng.randint(3, 8), rng.randint(3, 16))
        eg, og, ng = genus_triple(g)
        s = minimal_scheme(g, ANY)
        assert scheme_euler_genus(g, s) == eg
        o = minimal_scheme(g, ORIENTABLE)
        assert is_orientable(g, o) and scheme_euler_genus(g, o) == 2 * og
        if g.m >= g.n:
            n = minimal_scheme(g, NONORIENTABLE)
            assert not is_orientable(g, n) and scheme_euler_genus(g, n) == ng


def test_forest_has_no_nonorientable_scheme():
    assert minimal_scheme(path_graph(3), NONORIENTABLE) is None
    assert euler_genus_at_most(path_graph(3), 5, mode=NONORIENTABLE) is None


def test_lower_bound_never_exceeds_value():
    rng = random.Random(5)
    for _ in range(200):
        g = random_connected_graph(rng, rng.randint(1, 8), rng.randint(0, 20))
        assert euler_genus_lower_bound(g) <= euler_genus(g)


def test_orientably_simple():
    assert orientably_simple(complete_graph(7))
    assert not orientably_simple(complete_graph(5))
    assert orientably_simple(cycle_graph(3))
    with pytest.raises(ValueError):
        orientably_simple(path_graph(3))


def test_profiles(k33_open, k5_minus_e, k33_minus_e):
    p = genus_profile(k33_open)
    assert (p.eg, p.eg_plus, p.theta) == (1, 1, 0)
    q = genus_profile(k5_minus_e)
    assert (q.eg, q.eg_plus, q.theta) == (0, 1, 1)
    assert genus_profile(k33_minus_e).theta == 1


def test_budget_exhaustion_raises():
    clear_caches()
    with pytest.raises(BudgetExceeded):
        genus_triple(complete_graph(7), SolverBudget(node_limit=100))
    clear_caches()
    with pytest.raises(ValueError):
        SolverBudget(node_limit=0)


def test_profile_cache_persists(tmp_path, k33_open):
    path = tmp_path / "cache.txt"
    cache = ProfileCache(str(path))
    set_profile_cache(cache)
    try:
        p = genus_profile(k33_open)
        cache.flush()
        again = ProfileCache(str(path))
        assert len(again) == 1
        [(key, stored)] = again._data.items()
        assert stored == p
    finally:
        set_profile_cache(ProfileCache())


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        euler_genus_at_most(complete_graph(3), -1)


def test_terminal_profile_matches_direct_values():
    rng = random.Random(6)
    for _ in range(50):
        g = random_connected_graph(rng, 6, rng.randint(6, 13))
        pairs = [(x, y) for x in range(6) for y in range(x + 1, 6) if not g.has_edge(x, y)]
        if not pairs:
            continue
        tg = TerminalGraph(g, rng.choice(pairs))
        p = genus_profile(tg)
        plus = SimpleGraph(g.n, g.edges + (tg.terminals,))
        assert (p.eg, p.og, p.ng) == genus_triple(g)
        assert (p.eg_plus, p.ng_plus) == (euler_genus(plus), nonorientable_genus(plus))
        assert p.eg <= p.eg_plus <= p.eg + 2
        assert delete_edge(plus, tg.terminals) == g
