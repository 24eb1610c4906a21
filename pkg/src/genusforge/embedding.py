"""Embedding schemes (rotation system plus signature) and their faces."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graphs import Edge, SimpleGraph, components, norm_edge


class SchemeError(ValueError):
    pass


Triple = tuple[int, Edge, int]


@dataclass(frozen=True)
class EmbeddingScheme:
    """Rotation at every vertex (cyclic order of neighbours) and the set of
    edges carrying sign -1. All other edges have sign +1."""

    rotations: tuple[tuple[int, ...], ...]
    negative: frozenset[Edge] = frozenset()

    def __init__(self, rotations: Iterable[Iterable[int]], negative: Iterable[Iterable[int]] = ()):
        object.__setattr__(self, "rotations", tuple(tuple(r) for r in rotations))
        object.__setattr__(self, "negative", frozenset(norm_edge(*e) for e in negative))

    def sign(self, u: int, v: int) -> int:
        return -1 if norm_edge(u, v) in self.negative else 1

    def signs(self, g: SimpleGraph) -> dict[Edge, int]:
        return {e: self.sign(*e) for e in g.edges}

    @classmethod
    def from_signs(cls, rotations: Iterable[Iterable[int]], signs: Mapping[Edge, int]) -> "EmbeddingScheme":
        return cls(rotations, [e for e, s in signs.items() if s < 0])

    def check(self, g: SimpleGraph) -> None:
        if len(self.rotations) != g.n:
            raise SchemeError(f"scheme has {len(self.rotations)} rotations for {g.n} vertices")
        for v, rot in enumerate(self.rotations):
            if len(rot) != len(set(rot)) or set(rot) != g.adjacency_sets[v]:
                raise SchemeError(f"rotation at vertex {v} does not match its incident edges")
        stray = self.negative - g.edge_set
        if stray:
            raise SchemeError(f"signs given for non-edges {sorted(stray)}")

    def dump(self) -> str:
        """Text form: ``v: v-a v-b ...`` per vertex, then ``neg u-w`` per negative edge."""
        lines = []
        for v, rot in enumerate(self.rotations):
            lines.append(f"{v}: " + " ".join(f"{v}-{w}" for w in rot) if rot else f"{v}:")
        for u, w in sorted(self.negative):
            lines.append(f"neg {u}-{w}")
        return "\n".join(lines)

    @classmethod
    def parse(cls, text: str) -> "EmbeddingScheme":
        rots: dict[int, list[int]] = {}
        neg = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("neg "):
                a, b = line[4:].split("-")
                neg.append((int(a), int(b)))
                continue
            head, _, rest = line.partition(":")
            v = int(head)
            rots[v] = [int(tok.split("-")[1]) for tok in rest.split()]
        return cls([rots[v] for v in range(len(rots))], neg)


@dataclass(frozen=True)
class FaceTrace:
    faces: tuple[tuple[Triple, ...], ...]

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def total_length(self) -> int:
        return sum(len(f) for f in self.faces)


def _positions(scheme: EmbeddingScheme) -> list[dict[int, int]]:
    return [{w: i for i, w in enumerate(rot)} for rot in scheme.rotations]


def trace_faces(g: SimpleGraph, scheme: EmbeddingScheme) -> FaceTrace:
    """All faces, each as a cyclic sequence of (vertex, edge, side) triples.

    From ``(v, vw, s)`` the next triple is ``(w, e', s * sign(vw))`` with
    ``e'`` the successor (side +1) or predecessor (side -1) of ``wv`` in the
    rotation at ``w``. Each face is reported once; its mirror traversal is
    consumed along with it. Faces start from the smallest unused
    ``(vertex, neighbour, side)`` state with side +1 ordered first.
    """
    scheme.check(g)
    pos = _positions(scheme)
    rots = scheme.rotations
    used: set[tuple[int, int, int]] = set()
    faces = []
    starts = sorted(((v, w, s) for v in range(g.n) for w in rots[v] for s in (1, -1)),
                    key=lambda t: (t[0], t[1], t[2] < 0))
    for start in starts:
        if start in used:
            continue
        face = []
        v, w, s = start
        while True:
            used.add((v, w, s))
            face.append((v, norm_edge(v, w), s))
            s2 = s * scheme.sign(v, w)
            rot = rots[w]
            i = pos[w][v]
            nxt = rot[(i + s2) % len(rot)]
            # mirror state of the step just taken
            used.add((w, v, -s2))
            v, w, s = w, nxt, s2
            if (v, w, s) == start:
                break
            if (v, w, s) in used:
                raise SchemeError("face tracing revisited a state; scheme is inconsistent")
        faces.append(tuple(face))
    return FaceTrace(tuple(faces))


def _component_genus(nc: int, mc: int, fc: int) -> int:
    if mc == 0:
        return 0
    return 2 - nc + mc - fc


def scheme_euler_genus(g: SimpleGraph, scheme: EmbeddingScheme) -> int:
    """Euler genus of the scheme; disconnected graphs sum per component."""
    ft = trace_faces(g, scheme)
    comp_of = {}
    comps = components(g)
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    faces = [0] * len(comps)
    for f in ft.faces:
        faces[comp_of[f[0][0]]] += 1
    edges = [0] * len(comps)
    for u, _ in g.edges:
        edges[comp_of[u]] += 1
    return sum(_component_genus(len(c), edges[i], faces[i]) for i, c in enumerate(comps))


def spanning_forest(g: SimpleGraph) -> tuple[list[int], list[int]]:
    """BFS forest from the smallest vertex of each component.

    Returns (parent, order); roots have parent -1.
    """
    parent = [-2] * g.n
    order = []
    nbrs = g.neighbors
    for r in range(g.n):
        if parent[r] != -2:
            continue
        parent[r] = -1
        q = deque([r])
        while q:
            v = q.popleft()
            order.append(v)
            for w in nbrs[v]:
                if parent[w] == -2:
                    parent[w] = v
                    q.append(w)
    return parent, order


def _sides(g: SimpleGraph, scheme: EmbeddingScheme) -> list[int]:
    parent, order = spanning_forest(g)
    side = [1] * g.n
    for v in order:
        p = parent[v]
        if p >= 0:
            side[v] = side[p] * scheme.sign(p, v)
    return side


def is_orientable(g: SimpleGraph, scheme: EmbeddingScheme) -> bool:
    """No cycle carries an odd number of negative edges."""
    side = _sides(g, scheme)
    return all(scheme.sign(u, v) == side[u] * side[v] for u, v in g.edges)


def normalize_signature(g: SimpleGraph, scheme: EmbeddingScheme) -> EmbeddingScheme:
    """Equivalent scheme whose BFS spanning forest edges are all positive.

    Switching at a vertex reverses its rotation and flips the signs of its
    edges; this is applied at every vertex whose tree path carries an odd
    number of negative edges.
    """
    scheme.check(g)
    side = _sides(g, scheme)
    rots = [rot if side[v] > 0 else rot[::-1] for v, rot in enumerate(scheme.rotations)]
    neg = [(u, v) for u, v in g.edges if scheme.sign(u, v) * side[u] * side[v] < 0]
    return EmbeddingScheme(rots, neg)
