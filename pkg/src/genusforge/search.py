"""Branch-and-bound search over embedding schemes of a connected graph.

Rotations and signs are fixed lazily while faces are traced: whenever the
walk reaches a vertex whose successor (or predecessor) for the arriving
edge-end is still open, every admissible choice is tried. Signs of
spanning-tree edges are +1; the remaining signs are chosen on first
traversal. The walk is abandoned once the number of closed faces plus an
upper bound on the faces still to come drops below the target.

Internally an edge ``i`` yields darts ``2i`` (tail ``u``) and ``2i + 1``
(tail ``v``); a traversal state is ``2 * dart + (side < 0)``.

The engine is an explicit choice-point stack with an undo trail, compiled
with numba. It runs in slices of a fixed number of nodes so the Python
wrapper can enforce the time limit and resume where it stopped.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

ANY = "any"
ORIENTABLE = "orientable"
NONORIENTABLE = "nonorientable"
MODES = (ANY, ORIENTABLE, NONORIENTABLE)
_MODE_CODE = {ANY: 0, ORIENTABLE: 1, NONORIENTABLE: 2}


class BudgetExceeded(RuntimeError):
    """The node or time budget ran out before a verdict was reached."""


@dataclass(frozen=True)
class SolverBudget:
    node_limit: int = 10**8
    time_limit: float = 300.0
    parallel_width: int = 1

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0 or self.parallel_width <= 0:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = SolverBudget()


def _girth(n: int, adj: Sequence[Sequence[int]]) -> int:
    best = n + 1
    for s in range(n):
        dist = [-1] * n
        par = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    par[w] = v
                    q.append(w)
                elif par[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def _shortest_cycles(n: int, edges: Sequence[tuple[int, int]], girth: int) -> list[list[tuple[int, int]]]:
    """All cycles of length ``girth``, each as a list of normalized edges."""
    if girth > n:
        return []
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    found = set()
    out = []

    def extend(path: list[int]) -> None:
        v = path[-1]
        if len(path) == girth:
            if path[0] in adj[v]:
                key = frozenset(frozenset(p) for p in zip(path, path[1:] + path[:1]))
                if key not in found:
                    found.add(key)
                    out.append([tuple(sorted(p)) for p in zip(path, path[1:] + path[:1])])
            return
        for w in adj[v]:
            if w > path[0] and w not in path:
                extend(path + [w])

    for s in range(n):
        extend([s])
    return out


# engine status codes
_FOUND, _EXHAUSTED, _PAUSED = 1, 0, 2
# actions
_START, _STEP, _ARRIVE, _BACK = 0, 1, 2, 3
# scalar slots; the first _NSAVED are saved in every choice frame
(_S_PLEN, _S_FSTART, _S_FACES, _S_CSTATES, _S_NEGS, _S_FREE, _S_CSHORT, _S_SP, _S_TP,
 _S_ACTION, _S_CUR, _S_PENDING) = range(12)
_NSCAL = 12
# frame layout: kind, a, b, c (choice data), then the saved scalars
_F_KIND, _F_A, _F_B, _F_C = 0, 1, 2, 3
_F_SAVE = 4
_NSAVED = 7
_FRAME_W = _F_SAVE + _NSAVED + 1  # + trail pointer
_K_SIGN, _K_ROT = 0, 1


@njit(cache=True)
def _bound_ok(faces, cstates, cshort, open_len, total, short_total, girth, target):
    """Can ``target`` faces still be reached?

    Every future face has length >= girth. A face of length exactly girth is
    a shortest cycle and so uses an edge of the transversal, each of whose
    four states serves at most two faces; the other faces are longer.
    """
    rem = total - cstates
    if open_len > 0:
        lo = open_len if open_len > girth else girth
        if faces + 1 + (rem - 2 * lo) // (2 * girth) < target:
            return False
    elif faces + rem // (2 * girth) < target:
        return False
    short = (short_total - cshort) // 2
    if short > rem // (2 * girth):
        short = rem // (2 * girth)
    if open_len > girth:
        return faces + 1 + (rem - 2 * open_len + 2 * short) // (2 * (girth + 1)) >= target
    return faces + (rem + 2 * short) // (2 * (girth + 1)) >= target


@njit(cache=True)
def _rot_try(frame, sc, tail, out_ptr, out_list, deg, succ, pred, path, trail):
    """Apply the next admissible rotation choice of ``frame``; return the
    state to arrive at, or -1 when the choices are used up."""
    a = frame[_F_A]
    side = frame[_F_B]
    w = tail[a]
    dw = deg[w]
    d0 = path[sc[_S_FSTART]] >> 1
    v0 = tail[d0]
    base = out_ptr[w]
    idx = frame[_F_C] + 1
    while idx < 3 * dw:
        tier = idx // dw
        c = out_list[base + idx % dw]
        idx += 1
        if c == a:
            continue
        head = tail[c ^ 1]
        if tier == 0:
            if c != d0:
                continue
        elif tier == 1:
            if c == d0 or head != v0:
                continue
        else:
            if c == d0 or head == v0:
                continue
        if side > 0:
            if pred[c] >= 0:
                continue
            x = c
            cnt = 1
            good = True
            while True:
                if x == a:
                    good = cnt == dw
                    break
                x = succ[x]
                if x < 0:
                    break
                cnt += 1
            if not good:
                continue
            succ[a] = c
            pred[c] = a
            trail[sc[_S_TP]] = a * 4 + 1
            sc[_S_TP] += 1
            frame[_F_C] = idx - 1
            return 2 * c
        else:
            if succ[c] >= 0:
                continue
            x = a
            cnt = 1
            good = True
            while True:
                if x == c:
                    good = cnt == dw
                    break
                x = succ[x]
                if x < 0:
                    break
                cnt += 1
            if not good:
                continue
            succ[c] = a
            pred[a] = c
            trail[sc[_S_TP]] = c * 4 + 1
            sc[_S_TP] += 1
            frame[_F_C] = idx - 1
            return 2 * c + 1
    frame[_F_C] = idx
    return -1


@njit(cache=True)
def _sign_apply(frame, sc, sign, trail):
    e = frame[_F_A]
    choice = frame[_F_B]
    sign[e] = choice
    sc[_S_FREE] -= 1
    if choice < 0:
        sc[_S_NEGS] += 1
    trail[sc[_S_TP]] = e * 4 + 2
    sc[_S_TP] += 1


@njit(cache=True)
def _engine(sc, frames, trail, path, visited, succ, pred, sign, order, short_edge,
            tail, out_ptr, out_list, deg, girth, mode, target, slice_nodes):
    total = visited.shape[0]
    short_total = 0
    for i in range(short_edge.shape[0]):
        short_total += 4 * short_edge[i]
    nodes = 0
    action = sc[_S_ACTION]
    while True:
        nodes += 1
        if nodes > slice_nodes:
            sc[_S_ACTION] = action
            return _PAUSED, nodes
        if action == _START:
            st = -1
            for i in range(total):
                if visited[order[i]] == 0:
                    st = order[i]
                    break
            if st < 0:
                if sc[_S_FACES] >= target and (mode != 2 or sc[_S_NEGS] > 0):
                    sc[_S_ACTION] = _BACK
                    return _FOUND, nodes
                action = _BACK
                continue
            if not _bound_ok(sc[_S_FACES], sc[_S_CSTATES], sc[_S_CSHORT], 0, total, short_total,
                             girth, target):
                action = _BACK
                continue
            sc[_S_FSTART] = sc[_S_PLEN]
            visited[st] = 1
            trail[sc[_S_TP]] = st * 4
            sc[_S_TP] += 1
            path[sc[_S_PLEN]] = st
            sc[_S_PLEN] += 1
            sc[_S_CUR] = st
            action = _STEP
        elif action == _STEP:
            st = sc[_S_CUR]
            d = st >> 1
            e = d >> 1
            if sign[e] == 0:
                sp = sc[_S_SP]
                f = frames[sp]
                f[_F_KIND] = _K_SIGN
                f[_F_A] = e
                f[_F_C] = st
                forced = mode == 2 and sc[_S_FREE] == 1 and sc[_S_NEGS] == 0
                f[_F_B] = -1 if forced else 1
                for j in range(_NSAVED):
                    f[_F_SAVE + j] = sc[j]
                f[_F_SAVE + _NSAVED] = sc[_S_TP]
                sc[_S_SP] = sp + 1
                _sign_apply(f, sc, sign, trail)
            sg = sign[e]
            side = -sg if st & 1 else sg
            a = d ^ 1
            nxt = -1
            if side > 0:
                if succ[a] >= 0:
                    nxt = 2 * succ[a]
            else:
                if pred[a] >= 0:
                    nxt = 2 * pred[a] + 1
            if nxt < 0:
                sp = sc[_S_SP]
                f = frames[sp]
                f[_F_KIND] = _K_ROT
                f[_F_A] = a
                f[_F_B] = side
                f[_F_C] = -1
                for j in range(_NSAVED):
                    f[_F_SAVE + j] = sc[j]
                f[_F_SAVE + _NSAVED] = sc[_S_TP]
                sc[_S_SP] = sp + 1
                nxt = _rot_try(f, sc, tail, out_ptr, out_list, deg, succ, pred, path, trail)
                if nxt < 0:
                    sc[_S_SP] = sp
                    action = _BACK
                    continue
            sc[_S_PENDING] = nxt
            action = _ARRIVE
        elif action == _ARRIVE:
            st = sc[_S_PENDING]
            fs = sc[_S_FSTART]
            plen = sc[_S_PLEN]
            if visited[st]:
                if st != path[fs]:
                    action = _BACK
                    continue
                ok = True
                for i in range(fs, plen):
                    s0 = path[i]
                    d0 = s0 >> 1
                    sg0 = sign[d0 >> 1]
                    side0 = -1 if s0 & 1 else 1
                    ms = 2 * (d0 ^ 1) + (1 if -side0 * sg0 < 0 else 0)
                    if visited[ms]:
                        ok = False
                        break
                    visited[ms] = 1
                    trail[sc[_S_TP]] = ms * 4
                    sc[_S_TP] += 1
                    if short_edge[d0 >> 1]:
                        sc[_S_CSHORT] += 2
                if not ok:
                    action = _BACK
                    continue
                sc[_S_FACES] += 1
                sc[_S_CSTATES] += 2 * (plen - fs)
                action = _START
            else:
                visited[st] = 1
                trail[sc[_S_TP]] = st * 4
                sc[_S_TP] += 1
                path[plen] = st
                sc[_S_PLEN] = plen + 1
                if not _bound_ok(sc[_S_FACES], sc[_S_CSTATES], sc[_S_CSHORT], plen + 1 - fs, total,
                                 short_total, girth, target):
                    action = _BACK
                    continue
                sc[_S_CUR] = st
                action = _STEP
        else:
            resumed = False
            while sc[_S_SP] > 0:
                sp = sc[_S_SP] - 1
                f = frames[sp]
                mark = f[_F_SAVE + _NSAVED]
                tp = sc[_S_TP]
                while tp > mark:
                    tp -= 1
                    t = trail[tp]
                    kind = t & 3
                    idx = t >> 2
                    if kind == 0:
                        visited[idx] = 0
                    elif kind == 1:
                        c = succ[idx]
                        succ[idx] = -1
                        pred[c] = -1
                    else:
                        sign[idx] = 0
                sc[_S_TP] = tp
                for j in range(_NSAVED):
                    sc[j] = f[_F_SAVE + j]
                if f[_F_KIND] == _K_SIGN:
                    if f[_F_B] > 0:
                        f[_F_B] = -1
                        _sign_apply(f, sc, sign, trail)
                        sc[_S_CUR] = f[_F_C]
                        action = _STEP
                        resumed = True
                        break
                    sc[_S_SP] = sp
                else:
                    nxt = _rot_try(f, sc, tail, out_ptr, out_list, deg, succ, pred, path, trail)
                    if nxt >= 0:
                        sc[_S_PENDING] = nxt
                        action = _ARRIVE
                        resumed = True
                        break
                    sc[_S_SP] = sp
            if not resumed:
                # undo the root face start as well
                tp = sc[_S_TP]
                while tp > 0:
                    tp -= 1
                    t = trail[tp]
                    if t & 3 == 0:
                        visited[t >> 2] = 0
                sc[_S_TP] = 0
                sc[_S_ACTION] = _BACK
                return _EXHAUSTED, nodes


class SchemeSearch:
    """Find a scheme with at least ``target_faces`` faces, if one exists.

    ``n``/``edges`` describe a connected simple graph of minimum degree >= 2.
    """

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], mode: str = ANY,
                 budget: SolverBudget = DEFAULT_BUDGET):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.n = n
        self.edges = list(edges)
        self.m = m = len(self.edges)
        self.mode = mode
        self.budget = budget
        tail = [0] * (2 * m)
        out: list[list[int]] = [[] for _ in range(n)]
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            tail[2 * i] = u
            tail[2 * i + 1] = v
            out[u].append(2 * i)
            out[v].append(2 * i + 1)
            adj[u].append(v)
            adj[v].append(u)
        self.tail = tail
        self.out = out
        self.deg = [len(o) for o in out]
        self.girth = _girth(n, adj) if m else 1
        # BFS tree edges are positive
        tree = [False] * m
        seen = [False] * n
        self.root = max(range(n), key=lambda v: (self.deg[v], -v)) if n else 0
        if n:
            seen[self.root] = True
            q = deque([self.root])
            while q:
                v = q.popleft()
                for d in out[v]:
                    w = tail[d ^ 1]
                    if not seen[w]:
                        seen[w] = True
                        tree[d >> 1] = True
                        q.append(w)
        self.tree = tree
        self.nodes = 0
        self.witness: tuple[list[int], list[int]] | None = None

    def run(self, target_faces: int) -> bool:
        m = self.m
        if m == 0:
            return False
        total = 4 * m
        mode = _MODE_CODE[self.mode]
        tail = np.array(self.tail, dtype=np.int64)
        out_ptr = np.zeros(self.n + 1, dtype=np.int64)
        for v in range(self.n):
            out_ptr[v + 1] = out_ptr[v] + self.deg[v]
        out_list = np.array([d for o in self.out for d in o], dtype=np.int64)
        deg = np.array(self.deg, dtype=np.int64)
        sign = np.zeros(m, dtype=np.int64)
        free = 0
        for i in range(m):
            if self.tree[i] or self.mode == ORIENTABLE:
                sign[i] = 1
            else:
                free += 1
        root = self.root
        order = np.array(sorted(range(total), key=lambda st: (self.tail[st >> 1] != root, st & 1, st)),
                         dtype=np.int64)
        sc = np.zeros(_NSCAL, dtype=np.int64)
        sc[_S_FREE] = free
        sc[_S_ACTION] = _START
        frames = np.zeros((3 * m + 4, _FRAME_W), dtype=np.int64)
        trail = np.zeros(8 * m + 8, dtype=np.int64)
        path = np.zeros(total + 1, dtype=np.int64)
        visited = np.zeros(total, dtype=np.int8)
        succ = np.full(2 * m, -1, dtype=np.int64)
        pred = np.full(2 * m, -1, dtype=np.int64)
        deadline = time.monotonic() + self.budget.time_limit
        short_edge = self._short_edges()
        while True:
            # never run past the node allowance by more than one node
            slice_nodes = min(1 << 20, self.budget.node_limit - self.nodes)
            if slice_nodes <= 0:
                raise BudgetExceeded(f"node limit {self.budget.node_limit} exceeded")
            status, used = _engine(sc, frames, trail, path, visited, succ, pred, sign, order,
                                   short_edge, tail, out_ptr, out_list, deg, self.girth, mode,
                                   max(target_faces, 1), slice_nodes)
            self.nodes += int(used)
            if status == _FOUND:
                self.witness = (succ.tolist(), sign.tolist())
                return True
            if status == _EXHAUSTED:
                return False
            if self.nodes > self.budget.node_limit:
                raise BudgetExceeded(f"node limit {self.budget.node_limit} exceeded")
            if time.monotonic() > deadline:
                raise BudgetExceeded("time limit exceeded")

    def _short_edges(self) -> np.ndarray:
        """Indicator of an edge set meeting every shortest cycle (greedy)."""
        cycles = _shortest_cycles(self.n, self.edges, self.girth)
        chosen = np.zeros(self.m, dtype=np.int64)
        index = {e: i for i, e in enumerate(self.edges)}
        open_cycles = [{index[e] for e in c} for c in cycles]
        while open_cycles:
            counts: dict[int, int] = {}
            for c in open_cycles:
                for i in c:
                    counts[i] = counts.get(i, 0) + 1
            best = max(sorted(counts), key=counts.__getitem__)
            chosen[best] = 1
            open_cycles = [c for c in open_cycles if best not in c]
        return chosen

    def rotations(self) -> list[list[int]]:
        """Rotation (as neighbour lists) of the witness found by ``run``."""
        assert self.witness is not None
        succ, _ = self.witness
        rots = []
        for v in range(self.n):
            if not self.out[v]:
                rots.append([])
                continue
            d0 = self.out[v][0]
            rot, d = [], d0
            while True:
                rot.append(self.tail[d ^ 1])
                d = succ[d]
                if d == d0:
                    break
            rots.append(rot)
        return rots

    def negative_edges(self) -> list[tuple[int, int]]:
        assert self.witness is not None
        _, sign = self.witness
        return [self.edges[i] for i in range(self.m) if sign[i] < 0]
