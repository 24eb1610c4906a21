"""Canonical labeling by colour refinement and individualization.

Small-graph version of the usual partition-backtrack scheme. The only
automorphism pruning is for twins: two vertices of the target cell with the
same neighbourhood (apart from each other) give isomorphic subtrees, so only
one of them is individualized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph6 import write_graph6
from .graphs import AnyGraph, SimpleGraph, TerminalGraph, underlying


@dataclass(frozen=True, order=True)
class CanonicalForm:
    canonical_bytes: bytes
    terminal_class: tuple[int, ...] = ()

    def key(self) -> str:
        t = " ".join(map(str, self.terminal_class))
        return f"{self.canonical_bytes.decode('ascii')} {t}".strip()


def _refine(cells: list[list[int]], adj: Sequence[int]) -> list[list[int]]:
    while True:
        cell_of = {}
        for i, c in enumerate(cells):
            for v in c:
                cell_of[v] = i
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        new_cells: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new_cells.append(c)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                sig = tuple((adj[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            for sig in sorted(groups):
                new_cells.append(groups[sig])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _encode(n: int, edges: Sequence[tuple[int, int]], label: Sequence[int]) -> bytes:
    return write_graph6(SimpleGraph(n, [(label[u], label[v]) for u, v in edges]))


def canonical_labeling(g: SimpleGraph, colors: Sequence[int] | None = None) -> tuple[bytes, list[int]]:
    """Return (canonical graph6 bytes, labeling) for a vertex-coloured graph.

    ``labeling[v]`` is the canonical label of vertex ``v``. Colours are only
    compared for equality and order, so any integers will do.
    """
    n = g.n
    adj = [0] * n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    if colors is None:
        colors = [0] * n
    start: dict[int, list[int]] = {}
    for v in range(n):
        start.setdefault(colors[v], []).append(v)
    cells = _refine([start[c] for c in sorted(start)], adj)

    best: list = [None, None]

    def search(cells: list[list[int]]) -> None:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            label = [0] * n
            for pos, c in enumerate(cells):
                label[c[0]] = pos
            code = _encode(n, g.edges, label)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, label
            return
        cell = cells[target]
        tried: list[int] = []
        for v in cell:
            if any(((adj[v] ^ adj[u]) & ~((1 << u) | (1 << v))) == 0 for u in tried):
                continue
            tried.append(v)
            rest = [u for u in cell if u != v]
            search(_refine(cells[:target] + [[v], rest] + cells[target + 1:], adj))

    search(cells)
    return best[0], best[1]


def canonical_form(g: AnyGraph) -> CanonicalForm:
    if isinstance(g, TerminalGraph):
        colors = [0] * g.n
        for t in g.terminals:
            colors[t] = 1
        code, label = canonical_labeling(g.graph, colors)
        return CanonicalForm(code, tuple(sorted(label[t] for t in g.terminals)))
    code, _ = canonical_labeling(g)
    return CanonicalForm(code)


def canonical_graph(g: AnyGraph) -> AnyGraph:
    """Relabel ``g`` into its canonical labeling."""
    if isinstance(g, TerminalGraph):
        colors = [1 if v in g.terminals else 0 for v in range(g.n)]
        _, label = canonical_labeling(g.graph, colors)
        return TerminalGraph(g.graph.relabel(label), (label[g.terminals[0]], label[g.terminals[1]]))
    _, label = canonical_labeling(g)
    return g.relabel(label)


def is_isomorphic(g1: AnyGraph, g2: AnyGraph) -> bool:
    if isinstance(g1, TerminalGraph) != isinstance(g2, TerminalGraph):
        return False
    a, b = underlying(g1), underlying(g2)
    if a.n != b.n or a.m != b.m:
        return False
    if sorted(a.degree(v) for v in range(a.n)) != sorted(b.degree(v) for v in range(b.n)):
        return False
    return canonical_form(g1) == canonical_form(g2)


def has_terminal_swap(g: TerminalGraph) -> bool:
    """True if some automorphism of the underlying graph exchanges x and y."""
    x, y = g.terminals
    c1 = [0] * g.n
    c2 = [0] * g.n
    c1[x], c1[y] = 1, 2
    c2[x], c2[y] = 2, 1
    return canonical_labeling(g.graph, c1)[0] == canonical_labeling(g.graph, c2)[0]
