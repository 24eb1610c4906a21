"""Simple graphs, graphs with two terminals, minor-operations and 2-sums."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Union

import networkx as nx

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    """A finite simple graph on vertices ``0..n-1``.

    ``edges`` may be given as any iterable of pairs; it is normalized to a
    sorted tuple of ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        normed = set()
        for e in edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
            normed.add(norm_edge(u, v))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(normed)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency_sets(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(a)) for a in self.adjacency_sets)

    def degree(self, v: int) -> int:
        return len(self.adjacency_sets[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edge_set

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "SimpleGraph":
        nodes = sorted(g.nodes())
        idx = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(idx[u], idx[v]) for u, v in g.edges() if u != v])

    def relabel(self, perm: Iterable[int]) -> "SimpleGraph":
        """Vertex ``v`` becomes ``perm[v]``."""
        p = list(perm)
        return SimpleGraph(self.n, [(p[u], p[v]) for u, v in self.edges])

    def induced(self, vertices: Iterable[int]) -> tuple["SimpleGraph", dict[int, int]]:
        vs = sorted(set(vertices))
        idx = {v: i for i, v in enumerate(vs)}
        edges = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return SimpleGraph(len(vs), edges), idx

    def is_connected(self) -> bool:
        return self.n <= 1 or len(components(self)) == 1

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class TerminalGraph:
    """A simple graph with an unordered pair of distinct terminals."""

    graph: SimpleGraph
    terminals: tuple[int, int]

    def __init__(self, graph: SimpleGraph, terminals: Iterable[int]):
        x, y = terminals
        if x == y:
            raise GraphError("terminals must be distinct")
        if not (0 <= x < graph.n and 0 <= y < graph.n):
            raise GraphError(f"terminals {(x, y)} are not vertices")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "terminals", norm_edge(x, y))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @property
    def has_terminal_edge(self) -> bool:
        return self.terminals in self.graph.edge_set

    @property
    def in_open_class(self) -> bool:
        """Membership in G°_xy: the terminals are not adjacent."""
        return not self.has_terminal_edge

    def __repr__(self) -> str:
        return f"TerminalGraph(n={self.n}, m={self.m}, terminals={self.terminals})"


AnyGraph = Union[SimpleGraph, TerminalGraph]


def underlying(g: AnyGraph) -> SimpleGraph:
    return g.graph if isinstance(g, TerminalGraph) else g


class OpKind(str, enum.Enum):
    DELETE = "-"
    CONTRACT = "/"


class MinorOperation(NamedTuple):
    edge: Edge
    kind: OpKind

    def __str__(self) -> str:
        return f"{self.edge[0]}{self.kind.value}{self.edge[1]}"


def available_minor_ops(g: AnyGraph) -> list[MinorOperation]:
    ops = []
    forbidden = g.terminals if isinstance(g, TerminalGraph) else None
    for e in underlying(g).edges:
        ops.append(MinorOperation(e, OpKind.DELETE))
        if e != forbidden:
            ops.append(MinorOperation(e, OpKind.CONTRACT))
    return ops


def delete_edge(g: SimpleGraph, e: Edge) -> SimpleGraph:
    e = norm_edge(*e)
    if e not in g.edge_set:
        raise GraphError(f"edge {e} not in graph")
    return SimpleGraph(g.n, [f for f in g.edges if f != e])


def contract_edge(g: SimpleGraph, e: Edge) -> tuple[SimpleGraph, list[int]]:
    """Contract ``e`` and simplify; returns the graph and the old->new vertex map.

    The larger endpoint is merged into the smaller one and labels are
    compacted to ``0..n-2``.
    """
    u, v = norm_edge(*e)
    if (u, v) not in g.edge_set:
        raise GraphError(f"edge {(u, v)} not in graph")
    mapping = [i if i < v else i - 1 for i in range(g.n)]
    mapping[v] = u
    edges = set()
    for a, b in g.edges:
        a2, b2 = mapping[a], mapping[b]
        if a2 != b2:
            edges.add(norm_edge(a2, b2))
    return SimpleGraph(g.n - 1, edges), mapping


def apply_minor_op(g: AnyGraph, op: MinorOperation) -> AnyGraph:
    return apply_minor_op_with_map(g, op)[0]


def apply_minor_op_with_map(g: AnyGraph, op: MinorOperation) -> tuple[AnyGraph, list[int]]:
    op = MinorOperation(norm_edge(*op.edge), OpKind(op.kind))
    base = underlying(g)
    if op.edge not in base.edge_set:
        raise GraphError(f"operation {op} targets a missing edge")
    if op.kind is OpKind.DELETE:
        h, mapping = delete_edge(base, op.edge), list(range(base.n))
    else:
        if isinstance(g, TerminalGraph) and op.edge == g.terminals:
            raise GraphError("contracting the terminal edge xy is not a minor-operation")
        h, mapping = contract_edge(base, op.edge)
    if isinstance(g, TerminalGraph):
        x, y = g.terminals
        return TerminalGraph(h, (mapping[x], mapping[y])), mapping
    return h, mapping


def add_terminal_edge(g: TerminalGraph) -> TerminalGraph:
    """The graph G+ (adds xy if absent)."""
    if g.has_terminal_edge:
        return g
    return TerminalGraph(SimpleGraph(g.n, g.edges + (g.terminals,)), g.terminals)


def plus_graph(g: TerminalGraph) -> SimpleGraph:
    return add_terminal_edge(g).graph


def identify_terminals(g: TerminalGraph) -> SimpleGraph:
    """The simple graph G/xy; the edge xy need not be present."""
    x, y = g.terminals
    mapping = [i if i < y else i - 1 for i in range(g.n)]
    mapping[y] = x
    edges = {norm_edge(mapping[a], mapping[b]) for a, b in g.edges if mapping[a] != mapping[b]}
    return SimpleGraph(g.n - 1, edges)


def xy_sum(g1: TerminalGraph, g2: TerminalGraph, swap: bool = False) -> TerminalGraph:
    """The xy-sum of two graphs in G°_xy.

    Vertices of ``g1`` keep their labels; non-terminals of ``g2`` follow in
    increasing order. By default the smaller terminal of ``g2`` is glued to
    the smaller terminal of ``g1``; ``swap=True`` selects the other gluing.
    """
    for name, part in (("first", g1), ("second", g2)):
        if part.has_terminal_edge:
            raise GraphError(f"{name} part contains the terminal edge xy")
    x1, y1 = g1.terminals
    x2, y2 = g2.terminals
    if swap:
        x2, y2 = y2, x2
    mapping = {x2: x1, y2: y1}
    nxt = g1.n
    for v in range(g2.n):
        if v not in mapping:
            mapping[v] = nxt
            nxt += 1
    edges = list(g1.edges) + [(mapping[a], mapping[b]) for a, b in g2.edges]
    return TerminalGraph(SimpleGraph(nxt, edges), (x1, y1))


def disjoint_union(g1: SimpleGraph, g2: SimpleGraph) -> SimpleGraph:
    off = g1.n
    return SimpleGraph(g1.n + g2.n, list(g1.edges) + [(a + off, b + off) for a, b in g2.edges])


def one_sum(g1: SimpleGraph, v1: int, g2: SimpleGraph, v2: int) -> SimpleGraph:
    """Glue ``g2`` onto ``g1`` by identifying ``v2`` with ``v1``."""
    mapping = {v2: v1}
    nxt = g1.n
    for v in range(g2.n):
        if v != v2:
            mapping[v] = nxt
            nxt += 1
    return SimpleGraph(nxt, list(g1.edges) + [(mapping[a], mapping[b]) for a, b in g2.edges])


# ---------------------------------------------------------------- structure


def components(g: SimpleGraph) -> list[list[int]]:
    adj = g.adjacency_sets
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(sorted(comp))
    return out


def connectivity(g: AnyGraph) -> int:
    """Vertex connectivity; ``n - 1`` for complete graphs."""
    base = underlying(g)
    if base.n <= 1:
        return 0
    if base.m == base.n * (base.n - 1) // 2:
        return base.n - 1
    return nx.node_connectivity(base.to_networkx())


def block_vertex_sets(g: SimpleGraph) -> list[list[int]]:
    """Vertex sets of the blocks; isolated vertices are omitted."""
    nxg = g.to_networkx()
    return sorted(sorted(c) for c in nx.biconnected_components(nxg))


def blocks(g: AnyGraph) -> list[SimpleGraph]:
    base = underlying(g)
    return [base.induced(vs)[0] for vs in block_vertex_sets(base)]


def cut_edges(g: AnyGraph) -> list[Edge]:
    base = underlying(g)
    return sorted(norm_edge(u, v) for u, v in nx.bridges(base.to_networkx()))


def xy_bridges(g: TerminalGraph) -> list[TerminalGraph]:
    """The {x,y}-bridges of ``g``, each carrying the terminals.

    A bridge is either the edge xy itself or a component of G - {x, y}
    together with its edges to x and y. Vertices of each bridge keep their
    relative order; terminals are relabeled accordingly.
    """
    x, y = g.terminals
    base = g.graph
    rest = [v for v in range(base.n) if v not in (x, y)]
    sub, idx = base.induced(rest)
    inv = {i: v for v, i in idx.items()}
    out = []
    if g.has_terminal_edge:
        out.append(TerminalGraph(SimpleGraph(2, [(0, 1)]), (0, 1)))
    for comp in components(sub):
        vs = {inv[i] for i in comp} | {x, y}
        part_vs = sorted(vs)
        pidx = {v: i for i, v in enumerate(part_vs)}
        edges = [
            (pidx[a], pidx[b])
            for a, b in base.edges
            if a in vs and b in vs and (a, b) != (x, y)
        ]
        out.append(TerminalGraph(SimpleGraph(len(part_vs), edges), (pidx[x], pidx[y])))
    return out


def two_core(g: SimpleGraph) -> tuple[SimpleGraph, list[int], list[tuple[int, int]]]:
    """Strip vertices of degree <= 1 repeatedly.

    Returns the core (relabeled densely), the list of original vertices kept
    (core label -> original label) and the removed pendant edges as
    ``(leaf, attachment)`` pairs in removal order.
    """
    deg = [g.degree(v) for v in range(g.n)]
    adj = [set(a) for a in g.adjacency_sets]
    alive = [True] * g.n
    stack = [v for v in range(g.n) if deg[v] <= 1]
    removed: list[tuple[int, int]] = []
    while stack:
        v = stack.pop()
        if not alive[v] or deg[v] > 1:
            continue
        alive[v] = False
        for w in adj[v]:
            if alive[w]:
                removed.append((v, w))
                deg[w] -= 1
                adj[w].discard(v)
                if deg[w] <= 1:
                    stack.append(w)
        deg[v] = 0
    kept = [v for v in range(g.n) if alive[v]]
    core, _ = g.induced(kept)
    return core, kept, removed


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> SimpleGraph:
    return SimpleGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])
