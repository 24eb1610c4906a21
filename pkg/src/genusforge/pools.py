"""Graph pools for exhaustive sweeps and random instances for property checks."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import networkx as nx

from .canon import canonical_form
from .graphs import SimpleGraph, TerminalGraph


def connected_graphs(max_n: int = 6, max_m: int = 9, min_n: int = 1) -> list[SimpleGraph]:
    """All connected graphs up to isomorphism with the given size limits (n <= 7)."""
    if max_n > 7:
        raise ValueError("the graph atlas only covers graphs with at most 7 vertices")
    out = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if min_n <= n <= max_n and h.number_of_edges() <= max_m and n and nx.is_connected(h):
            out.append(SimpleGraph.from_networkx(h))
    return out


@lru_cache(maxsize=4)
def _terminal_pool(max_n: int, max_m: int) -> tuple[TerminalGraph, ...]:
    seen = {}
    for g in connected_graphs(max_n, max_m, min_n=3):
        for x, y in itertools.combinations(range(g.n), 2):
            if not g.has_edge(x, y):
                t = TerminalGraph(g, (x, y))
                seen.setdefault(canonical_form(t), t)
    return tuple(seen[k] for k in sorted(seen, key=lambda c: (seen[c].n, seen[c].m, c)))


def terminal_pool(max_n: int = 6, max_m: int = 9) -> list[TerminalGraph]:
    """Connected terminal graphs with nonadjacent terminals, one per isomorphism
    class (terminals may be exchanged), ordered by size then canonical form."""
    return list(_terminal_pool(max_n, max_m))


def random_connected_graph(rng: random.Random, n: int, m: int) -> SimpleGraph:
    """Random spanning tree on n vertices plus extra edges up to m (capped)."""
    if n <= 0:
        return SimpleGraph(0, [])
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    missing = [e for e in itertools.combinations(range(n), 2) if e not in edges]
    rng.shuffle(missing)
    edges.update(missing[:max(0, m - len(edges))])
    return SimpleGraph(n, edges)


def random_terminal_graph(rng: random.Random, n: int, m: int, open_class: bool = True) -> TerminalGraph:
    """Random connected terminal graph; with ``open_class`` the terminals are
    nonadjacent (n must then be at least 3 and the graph not complete)."""
    for _ in range(1000):
        g = random_connected_graph(rng, n, m)
        pairs = [p for p in itertools.combinations(range(n), 2)
                 if not (open_class and g.has_edge(*p))]
        if pairs:
            return TerminalGraph(g, rng.choice(pairs))
    raise ValueError(f"no terminal pair available for n={n}, m={m}")
