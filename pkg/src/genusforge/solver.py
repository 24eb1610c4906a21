"""Exact Euler, orientable and nonorientable genus.

Graphs are reduced to their 2-core (pendant trees never change a genus) and,
unless ``decompose=False``, split into blocks: Euler and orientable genus add
over blocks, and the nonorientable genus of a 1-sum is
``sum(eg) + prod(sigma)``. Each block is solved by iterative deepening on
:class:`SchemeSearch`. With ``decompose=False`` a connected graph is searched
as a single unit, which is what the block-additivity checks compare against.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from .canon import canonical_form, canonical_labeling
from .embedding import EmbeddingScheme
from .graphs import SimpleGraph, TerminalGraph, block_vertex_sets, components, plus_graph, two_core
from .search import (ANY, DEFAULT_BUDGET, NONORIENTABLE, ORIENTABLE, BudgetExceeded,
                     SchemeSearch, SolverBudget)

__all__ = [
    "ANY", "ORIENTABLE", "NONORIENTABLE", "BudgetExceeded", "SolverBudget",
    "euler_genus_at_most", "euler_genus", "orientable_genus", "nonorientable_genus",
    "genus_triple", "minimal_scheme", "orientably_simple", "is_planar", "euler_genus_lower_bound", "clear_caches",
    "GenusProfile", "ProfileCache", "genus_profile", "set_profile_cache", "default_cache_path",
]

_Scheme = tuple[list[list[int]], list[tuple[int, int]]]  # rotations, negative edges


def is_planar(g: SimpleGraph) -> bool:
    return nx.check_planarity(g.to_networkx())[0]


def _planar_rotations(g: SimpleGraph) -> Optional[list[list[int]]]:
    ok, emb = nx.check_planarity(g.to_networkx())
    if not ok:
        return None
    return [list(emb.neighbors_cw_order(v)) if g.degree(v) else [] for v in range(g.n)]


def _is_orientable_scheme(n: int, edges, negative) -> bool:
    neg = set(negative)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v in edges:
        s = -1 if (u, v) in neg or (v, u) in neg else 1
        adj[u].append((v, s))
        adj[v].append((u, s))
    side = [0] * n
    for r in range(n):
        if side[r]:
            continue
        side[r] = 1
        stack = [r]
        while stack:
            v = stack.pop()
            for w, s in adj[v]:
                if not side[w]:
                    side[w] = side[v] * s
                    stack.append(w)
                elif side[w] != side[v] * s:
                    return False
    return True


def _decide_connected(g: SimpleGraph, k: int, mode: str, budget: SolverBudget) -> Optional[_Scheme]:
    """Decision on a connected graph of minimum degree >= 2 (or a single vertex)."""
    if g.m == 0:
        return None if mode == NONORIENTABLE else ([[] for _ in range(g.n)], [])
    if mode != NONORIENTABLE:
        rot = _planar_rotations(g)
        if rot is not None:
            return rot, []
        if k == 0:
            return None
    if k < 0:
        return None
    target = 2 - g.n + g.m - k
    search = SchemeSearch(g.n, g.edges, mode, budget)
    if not search.run(max(target, 1)):
        return None
    return search.rotations(), search.negative_edges()


def _lower_bound(g: SimpleGraph) -> int:
    if g.m < g.n:
        return 0
    girth = SchemeSearch(g.n, g.edges).girth
    return max(0, 2 - g.n + g.m - (2 * g.m) // girth)


def euler_genus_lower_bound(g: SimpleGraph) -> int:
    """Face-count bound: every face of a graph with a cycle has length >= girth."""
    if g.m + len(components(g)) == g.n:
        return 0
    return _lower_bound(g)


class _Block:
    """Cached minimum-genus data of one connected 2-core block, in canonical labels."""

    __slots__ = ("graph", "eg", "og", "ng", "eg_w", "og_w", "ng_w", "lock")

    def __init__(self, graph: SimpleGraph):
        self.graph = graph
        self.eg: Optional[int] = None
        self.og: Optional[int] = None
        self.ng: Optional[int] = None
        self.eg_w: Optional[_Scheme] = None
        self.og_w: Optional[_Scheme] = None
        self.ng_w: Optional[_Scheme] = None
        self.lock = threading.Lock()

    def solve_eg(self, budget: SolverBudget) -> None:
        if self.eg is not None:
            return
        g = self.graph
        k = _lower_bound(g)
        while True:
            w = _decide_connected(g, k, ANY, budget)
            if w is not None:
                self.eg, self.eg_w = k, w
                orientable = _is_orientable_scheme(g.n, g.edges, w[1])
                if orientable and self.og is None:
                    self.og, self.og_w = k // 2, w
                if not orientable and self.ng is None:
                    self.ng, self.ng_w = k, w
                return
            k += 1

    def solve_og(self, budget: SolverBudget) -> None:
        self.solve_eg(budget)
        if self.og is not None:
            return
        h = math.ceil(self.eg / 2)
        while True:
            w = _decide_connected(self.graph, 2 * h, ORIENTABLE, budget)
            if w is not None:
                self.og, self.og_w = h, w
                return
            h += 1

    def solve_ng(self, budget: SolverBudget) -> None:
        self.solve_eg(budget)
        if self.ng is not None:
            return
        if self.graph.m < self.graph.n:
            self.ng, self.ng_w = 0, None
            return
        k = max(self.eg, 1)
        while True:
            w = _decide_connected(self.graph, k, NONORIENTABLE, budget)
            if w is not None:
                self.ng, self.ng_w = k, w
                return
            k += 1


_BLOCKS: dict[bytes, _Block] = {}
_BLOCKS_LOCK = threading.Lock()


def clear_caches() -> None:
    with _BLOCKS_LOCK:
        _BLOCKS.clear()


def _block_for(g: SimpleGraph) -> tuple[_Block, list[int]]:
    """Block entry plus the labeling original -> entry labels.

    Planar blocks are cheap to solve and are not worth canonicalizing; only
    nonplanar blocks go through the shared cache.
    """
    identity = list(range(g.n))
    if g.m < 9:  # fewer edges than K3,3
        return _Block(g), identity
    rot = _planar_rotations(g)
    if rot is not None:
        blk = _Block(g)
        blk.eg = blk.og = 0
        blk.eg_w = blk.og_w = (rot, [])
        return blk, identity
    code, label = canonical_labeling(g)
    with _BLOCKS_LOCK:
        blk = _BLOCKS.get(code)
        if blk is None:
            blk = _BLOCKS[code] = _Block(g.relabel(label))
    return blk, label


def _map_scheme(w: _Scheme, inv: list[int]) -> _Scheme:
    rots, neg = w
    out: list[list[int]] = [[] for _ in range(max(inv, default=-1) + 1)]
    for c, rot in enumerate(rots):
        out[inv[c]] = [inv[x] for x in rot]
    return out, [(inv[a], inv[b]) for a, b in neg]


@dataclass
class _Unit:
    """One searched unit (a block, or a whole component core) in original labels."""

    vertices: list[int]
    block: _Block
    inv: list[int]  # canonical label -> original vertex

    def scheme(self, which: str, budget: SolverBudget) -> Optional[_Scheme]:
        with self.block.lock:
            getattr(self.block, f"solve_{which}")(budget)
        w = getattr(self.block, f"{which}_w")
        return None if w is None else _map_scheme(w, self.inv)

    def value(self, which: str, budget: SolverBudget) -> int:
        with self.block.lock:
            getattr(self.block, f"solve_{which}")(budget)
        return getattr(self.block, which)

    @property
    def has_cycle(self) -> bool:
        return self.block.graph.m >= self.block.graph.n and self.block.graph.m > 0


def _units(g: SimpleGraph, decompose: bool) -> tuple[list[list[_Unit]], list[int], list[tuple[int, int]]]:
    """Per component, the searchable units of the 2-core."""
    core, kept, removed = two_core(g)
    per_comp: list[list[_Unit]] = []
    for comp in components(core):
        if len(comp) == 1:
            continue
        sub, _ = core.induced(comp)
        pieces = block_vertex_sets(sub) if decompose else [list(range(sub.n))]
        units = []
        for piece in pieces:
            h, _ = sub.induced(piece)
            blk, label = _block_for(h)
            inv = [0] * h.n
            for i, c in enumerate(label):
                inv[c] = kept[comp[piece[i]]]
            units.append(_Unit([kept[comp[i]] for i in piece], blk, inv))
        per_comp.append(units)
    return per_comp, kept, removed


def _assemble(g: SimpleGraph, parts: list[_Scheme], removed: list[tuple[int, int]]) -> EmbeddingScheme:
    rot: list[list[int]] = [[] for _ in range(g.n)]
    neg: list[tuple[int, int]] = []
    for rots, negs in parts:
        for v, r in enumerate(rots):
            if r:
                rot[v].extend(r)
        neg.extend(negs)
    for leaf, w in reversed(removed):
        rot[w].append(leaf)
        rot[leaf].append(w)
    return EmbeddingScheme(rot, neg)


def _sigma_units(units: list[_Unit], budget: SolverBudget) -> list[int]:
    out = []
    for u in units:
        if not u.has_cycle:
            out.append(0)
            continue
        out.append(u.value("ng", budget) - u.value("eg", budget))
    return out


def genus_triple(g: SimpleGraph, budget: SolverBudget = DEFAULT_BUDGET,
                 decompose: bool = True) -> tuple[int, int, int]:
    """(Euler genus, orientable genus, nonorientable genus)."""
    if g.m < 9 or is_planar(g):
        acyclic = g.m + len(components(g)) == g.n
        return 0, 0, 0 if acyclic else 1
    per_comp, _, _ = _units(g, decompose)
    eg = og = 0
    cyc_sigmas = []
    for units in per_comp:
        for u in units:
            eg += u.value("eg", budget)
            og += u.value("og", budget)
        cyc = [u for u in units if u.has_cycle]
        if cyc:
            cyc_sigmas.append(math.prod(_sigma_units(cyc, budget)))
    if not cyc_sigmas:
        return eg, og, 0
    return eg, og, eg + math.prod(cyc_sigmas)


def euler_genus(g: SimpleGraph, budget: SolverBudget = DEFAULT_BUDGET, decompose: bool = True) -> int:
    per_comp, _, _ = _units(g, decompose)
    return sum(u.value("eg", budget) for units in per_comp for u in units)


def orientable_genus(g: SimpleGraph, budget: SolverBudget = DEFAULT_BUDGET, decompose: bool = True) -> int:
    per_comp, _, _ = _units(g, decompose)
    return sum(u.value("og", budget) for units in per_comp for u in units)


def nonorientable_genus(g: SimpleGraph, budget: SolverBudget = DEFAULT_BUDGET,
                        decompose: bool = True) -> int:
    return genus_triple(g, budget, decompose)[2]


def minimal_scheme(g: SimpleGraph, mode: str = ANY, budget: SolverBudget = DEFAULT_BUDGET,
                   decompose: bool = True) -> Optional[EmbeddingScheme]:
    """A scheme realizing the minimum for ``mode``; None for acyclic graphs in
    nonorientable mode."""
    per_comp, _, removed = _units(g, decompose)
    which = {ANY: "eg", ORIENTABLE: "og"}.get(mode)
    parts: list[_Scheme] = []
    if which is not None:
        for units in per_comp:
            parts.extend(u.scheme(which, budget) for u in units)
        return _assemble(g, parts, removed)
    # nonorientable: one unit carries a crosscap, preferring one with sigma = 0
    cyc = [u for units in per_comp for u in units if u.has_cycle]
    if not cyc:
        return None
    sig = _sigma_units(cyc, budget)
    chosen = cyc[sig.index(0)] if 0 in sig else cyc[0]
    for units in per_comp:
        for u in units:
            parts.append(u.scheme("ng" if u is chosen else "eg", budget))
    return _assemble(g, parts, removed)


def _min_value(g: SimpleGraph, mode: str, budget: SolverBudget, decompose: bool) -> Optional[int]:
    eg, og, ng = genus_triple(g, budget, decompose) if mode != ANY else (euler_genus(g, budget, decompose), 0, 0)
    if mode == ANY:
        return eg
    if mode == ORIENTABLE:
        return 2 * og
    has_cycle = g.m >= g.n - len(components(g)) + 1
    return ng if has_cycle else None


def euler_genus_at_most(g: SimpleGraph, k: int, budget: SolverBudget = DEFAULT_BUDGET,
                        mode: str = ANY, decompose: bool = True) -> Optional[EmbeddingScheme]:
    """A scheme of Euler genus <= k (restricted to ``mode``), or None if none exists.

    For a single 2-connected unit this is one bounded search at ``k``; for
    separable graphs the per-block minima are combined.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    per_comp, _, removed = _units(g, decompose)
    flat = [u for units in per_comp for u in units]
    if len(flat) == 1 and flat[0].block.graph.m > 0:
        u = flat[0]
        blk = u.block
        with blk.lock:
            w = _decide_connected(blk.graph, k, mode, budget)
        if w is None:
            return None
        return _assemble(g, [_map_scheme(w, u.inv)], removed)
    if not flat:
        if mode == NONORIENTABLE:
            return None
        return _assemble(g, [], removed)
    value = _min_value(g, mode, budget, decompose)
    if value is None or value > k:
        return None
    return minimal_scheme(g, mode, budget, decompose)


def orientably_simple(g: SimpleGraph, budget: SolverBudget = DEFAULT_BUDGET) -> bool:
    """True iff the nonorientable genus is 2g + 1. Trees are rejected."""
    if g.m < g.n - len(components(g)) + 1:
        raise ValueError("orientable simplicity is not defined for forests")
    eg, og, ng = genus_triple(g, budget)
    return ng == 2 * og + 1


@dataclass(frozen=True)
class GenusProfile:
    """Exact genus values of a terminal graph G and of G+ (G with xy added)."""

    eg: int
    og: int
    ng: int
    eg_plus: int
    ng_plus: int

    @property
    def theta(self) -> int:
        return self.eg_plus - self.eg

    @property
    def theta_tilde(self) -> int:
        return self.ng_plus - self.ng

    @property
    def sigma(self) -> int:
        return self.ng - self.eg

    @property
    def sigma_plus(self) -> int:
        return self.ng_plus - self.eg_plus

    def as_dict(self) -> dict[str, int]:
        return {
            "eg": self.eg, "og": self.og, "ng": self.ng, "eg_plus": self.eg_plus,
            "ng_plus": self.ng_plus, "theta": self.theta, "theta_tilde": self.theta_tilde,
            "sigma": self.sigma, "sigma_plus": self.sigma_plus,
        }


class ProfileCache:
    """Memo of profiles keyed by terminal canonical form, optionally backed by
    a text file with lines ``canonical_graph6 x y eg og ng eg_plus ng_plus``."""

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self._data: dict[tuple[bytes, tuple[int, ...]], GenusProfile] = {}
        self._new: list[tuple[bytes, tuple[int, ...]]] = []
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            self.load(path)

    def load(self, path: str) -> None:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) != 8:
                    continue
                key = (parts[0].encode("ascii"), (int(parts[1]), int(parts[2])))
                self._data[key] = GenusProfile(*map(int, parts[3:]))

    def get(self, key):
        return self._data.get(key)

    def put(self, key, profile: GenusProfile) -> None:
        with self._lock:
            if key not in self._data:
                self._data[key] = profile
                self._new.append(key)

    def __len__(self) -> int:
        return len(self._data)

    def flush(self) -> None:
        """Append profiles computed since the last flush to the backing file."""
        if not self.path or not self._new:
            return
        os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
        with self._lock, open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            for code, (x, y) in self._new:
                p = self._data[(code, (x, y))]
                fh.write(f"{code.decode('ascii')} {x} {y} {p.eg} {p.og} {p.ng} {p.eg_plus} {p.ng_plus}\n")
            self._new.clear()


def default_cache_path() -> str:
    return os.environ.get("GENUSFORGE_CACHE") or os.path.join(
        os.path.expanduser("~"), ".cache", "genusforge", "profiles.txt")


_PROFILES = ProfileCache()


def set_profile_cache(cache: ProfileCache) -> None:
    global _PROFILES
    _PROFILES = cache


def genus_profile(g: TerminalGraph, budget: SolverBudget = DEFAULT_BUDGET) -> GenusProfile:
    form = canonical_form(g)
    key = (form.canonical_bytes, form.terminal_class)
    cached = _PROFILES.get(key)
    if cached is not None:
        return cached
    eg, og, ng = genus_triple(g.graph, budget)
    plus = plus_graph(g)
    eg_plus, _, ng_plus = genus_triple(plus, budget)
    profile = GenusProfile(eg, og, ng, eg_plus, ng_plus)
    _PROFILES.put(key, profile)
    return profile
