"""Exhaustive pair sweeps over a pool of small terminal graphs."""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .criticality import (EG, EGP, class_flags, operation_values, parameter_value, predicted_decrease,
                          predicted_tight_classes, CRITICAL_EGP)
from .graph6 import write_graph6, write_tg6
from .graphs import (MinorOperation, OpKind, SimpleGraph, TerminalGraph, apply_minor_op, available_minor_ops,
                     blocks, one_sum, plus_graph, xy_sum)
from .pools import random_connected_graph
from .solver import DEFAULT_BUDGET, BudgetExceeded, SolverBudget, euler_genus, genus_triple
from .twosum import one_sum_nonorientable, verify_richter

Progress = Optional[Callable[[int, int], None]]


@dataclass
class SweepReport:
    name: str
    checked: int = 0
    disagreements: list[dict] = field(default_factory=list)
    unverified: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"suite": self.name, "checked": self.checked, "disagreements": len(self.disagreements),
                "unverified": len(self.unverified), "seconds": round(self.seconds, 1),
                "examples": self.disagreements[:5]}

    def line(self) -> str:
        return (f"suite={self.name} checked={self.checked} disagreements={len(self.disagreements)} "
                f"unverified={len(self.unverified)}")


def ordered_pairs(pool: Sequence[TerminalGraph],
                  rows: Optional[Iterable[int]] = None) -> Iterator[tuple[int, int, bool]]:
    for i in range(len(pool)) if rows is None else rows:
        for j in range(len(pool)):
            for swap in (False, True):
                yield i, j, swap


def _merge(reports: Sequence[SweepReport], seconds: float) -> SweepReport:
    out = SweepReport(reports[0].name, seconds=seconds)
    for r in reports:
        out.checked += r.checked
        out.disagreements.extend(r.disagreements)
        out.unverified.extend(r.unverified)
    return out


def _row_slices(n: int, jobs: int) -> list[list[int]]:
    # interleaved so that small and large first parts are spread evenly
    return [list(range(k, n, jobs)) for k in range(min(jobs, n))]


def _run_sharded(worker: Callable, pool: Sequence[TerminalGraph], jobs: int, *args) -> list:
    """Run ``worker(pool, rows, *args)`` over row shards in worker processes.
    Results come back in shard order, so merged reports do not depend on
    scheduling."""
    shards = _row_slices(len(pool), jobs)
    with ProcessPoolExecutor(max_workers=len(shards)) as ex:
        futures = [ex.submit(worker, list(pool), rows, *args) for rows in shards]
        return [f.result() for f in futures]


def _sort_key(report: dict) -> tuple:
    return report["g1"], report["g2"], report["swap"], report.get("op", "")


def richter_sweep(pool: Sequence[TerminalGraph], nonorientable: bool = True,
                  budget: SolverBudget = DEFAULT_BUDGET, progress: Progress = None,
                  jobs: int = 1, rows: Optional[Iterable[int]] = None) -> SweepReport:
    """Sum predictions against the solver for every ordered pair and both gluings.

    ``rows`` restricts the first part to the given pool indices; ``jobs > 1``
    shards the rows over worker processes (progress is then not reported).
    """
    t0 = time.monotonic()
    if jobs > 1:
        reps = _run_sharded(_richter_rows, pool, jobs, nonorientable, budget)
        rep = _merge(reps, time.monotonic() - t0)
        rep.disagreements.sort(key=_sort_key)
        rep.unverified.sort(key=_sort_key)
        return rep
    rep = SweepReport("richter-nonorientable" if nonorientable else "richter")
    total = 2 * len(pool) ** 2
    for i, j, swap in ordered_pairs(pool, rows):
        r = verify_richter(pool[i], pool[j], budget, swap=swap, nonorientable=nonorientable)
        rep.checked += 1
        if r["verdict"] == "mismatch":
            rep.disagreements.append(r)
        elif r["verdict"] == "unverified":
            rep.unverified.append(r)
        if progress and rep.checked % 5000 == 0:
            progress(rep.checked, total)
    rep.seconds = time.monotonic() - t0
    return rep


def _richter_rows(pool, rows, nonorientable, budget) -> SweepReport:
    return richter_sweep(pool, nonorientable, budget, rows=rows)


@dataclass
class _Part:
    eg: int
    egp: int
    ops: list[MinorOperation]
    connected: list[bool]
    op_eg: dict
    op_egp: dict
    flags: frozenset

    @property
    def theta(self) -> int:
        return self.egp - self.eg


def _part(g: TerminalGraph, budget: SolverBudget) -> _Part:
    eg, egp = parameter_value(g, EG, budget), parameter_value(g, EGP, budget)
    ops = available_minor_ops(g)
    veg, vegp = operation_values(g, EG, budget), operation_values(g, EGP, budget)
    flags = class_flags(len(ops), {o for o in ops if veg[o] <= eg - 1}, {o for o in ops if veg[o] <= eg - 2},
                        {o for o in ops if vegp[o] <= egp - 1}, {o for o in ops if vegp[o] <= egp - 2})
    connected = [apply_minor_op(g, o).graph.is_connected() for o in ops]
    return _Part(eg, egp, ops, connected, veg, vegp, flags)


def _drops(whole: TerminalGraph, ops: Sequence[MinorOperation], base_eg: int, base_egp: int,
           budget: SolverBudget) -> list[tuple[bool, bool]]:
    """Per operation: does it lower eg, eg_plus of ``whole``? Values cannot
    go below zero, so a zero base needs no search."""
    out = []
    for op in ops:
        m = apply_minor_op(whole, op)
        d_eg = base_eg > 0 and euler_genus(m.graph, budget) < base_eg
        d_egp = base_egp > 0 and euler_genus(plus_graph(m), budget) < base_egp
        out.append((d_eg, d_egp))
    return out


def parts_sweep(pool: Sequence[TerminalGraph], budget: SolverBudget = DEFAULT_BUDGET,
                progress: Progress = None, jobs: int = 1,
                rows: Optional[Iterable[int]] = None) -> tuple[SweepReport, SweepReport]:
    """Operation-level criteria (per operation on the first part) and
    tight-part classification (per pair), each checked against direct
    evaluation on the modified sums."""
    t0 = time.monotonic()
    if jobs > 1:
        pairs = _run_sharded(_parts_rows, pool, jobs, budget)
        lemma = _merge([p[0] for p in pairs], time.monotonic() - t0)
        general = _merge([p[1] for p in pairs], lemma.seconds)
        for rep in (lemma, general):
            rep.disagreements.sort(key=_sort_key)
            rep.unverified.sort(key=_sort_key)
        return lemma, general
    lemma = SweepReport("parts")
    general = SweepReport("general")
    parts = [_part(g, budget) for g in pool]
    total = 2 * len(pool) ** 2
    done = 0
    for i, j, swap in ordered_pairs(pool, rows):
        g1, g2 = pool[i], pool[j]
        p1, p2 = parts[i], parts[j]
        eta = p1.theta + p2.theta
        whole = xy_sum(g1, g2, swap=swap)
        ident = {"g1": write_tg6(g1), "g2": write_tg6(g2), "swap": swap, "eta": eta}
        try:
            base_egp = euler_genus(plus_graph(whole), budget)
            base_eg = euler_genus(whole.graph, budget) if base_egp else 0
            drops = _drops(whole, p1.ops, base_eg, base_egp, budget)
        except BudgetExceeded as exc:
            lemma.unverified.append(dict(ident, reason=str(exc)))
            general.unverified.append(dict(ident, reason=str(exc)))
            continue
        for op, conn, (d_eg, d_egp) in zip(p1.ops, p1.connected, drops):
            if not conn:
                continue
            meg, megp = p1.op_eg[op], p1.op_egp[op]
            want_eg = predicted_decrease(eta, meg <= p1.eg - 1, meg <= p1.eg - 2, megp <= p1.egp - 1,
                                         megp <= p1.egp - 2)
            want_egp = megp <= p1.egp - 1
            lemma.checked += 1
            if want_eg != d_eg or want_egp != d_egp:
                lemma.disagreements.append(dict(ident, op=str(op), predicted=(want_eg, want_egp),
                                                observed=(d_eg, d_egp)))
        tight_eg = all(d for d, _ in drops)
        tight_egp = all(d for _, d in drops)
        want_eg = bool(p1.flags & predicted_tight_classes(eta))
        want_egp = CRITICAL_EGP in p1.flags
        general.checked += 1
        if want_eg != tight_eg or want_egp != tight_egp:
            general.disagreements.append(dict(ident, flags=sorted(p1.flags), predicted=(want_eg, want_egp),
                                              observed=(tight_eg, tight_egp)))
        done += 1
        if progress and done % 5000 == 0:
            progress(done, total)
    lemma.seconds = general.seconds = time.monotonic() - t0
    return lemma, general


def _parts_rows(pool, rows, budget) -> tuple[SweepReport, SweepReport]:
    return parts_sweep(pool, budget, rows=rows)


# -- randomized identities -------------------------------------------------

LEMMA_NAMES = ("cut-edge", "two-separated", "ng-upper", "parity", "block-additivity", "one-sum-ng")

# per instance; instances that exceed it are replaced and listed as unverified
LEMMA_BUDGET = SolverBudget(node_limit=2 * 10**6, time_limit=60.0)


def _density(rng: random.Random, n: int, lo: int, cap: int) -> int:
    return rng.randint(lo, max(lo, min(cap, n * (n - 1) // 2)))


def _rand_part(rng: random.Random, lo_n: int, hi_n: int, cap_m: int, cyclic: bool = False,
               extra: int = 0) -> SimpleGraph:
    """Random connected graph; ``extra`` raises the minimum edge count above a tree."""
    n = rng.randint(lo_n, hi_n)
    return random_connected_graph(rng, n, _density(rng, n, n - 1 + max(extra, int(cyclic)), cap_m))


def _open_terminals(rng: random.Random, g: SimpleGraph) -> Optional[TerminalGraph]:
    pairs = [p for p in itertools.combinations(range(g.n), 2) if not g.has_edge(*p)]
    return TerminalGraph(g, rng.choice(pairs)) if pairs else None


def _lemma_cut_edge(rng: random.Random, budget: SolverBudget) -> Optional[dict]:
    a, b = _rand_part(rng, 1, 5, 10, extra=3), _rand_part(rng, 1, 5, 10, extra=3)
    u, w = rng.randrange(a.n), a.n + rng.randrange(b.n)
    g = SimpleGraph(a.n + b.n, list(a.edges) + [(p + a.n, q + a.n) for p, q in b.edges] + [(u, w)])
    tg = _open_terminals(rng, g)
    if tg is None:
        return None
    contracted = apply_minor_op(tg, MinorOperation((u, w), OpKind.CONTRACT))
    before = (euler_genus(g, budget), euler_genus(plus_graph(tg), budget))
    after = (euler_genus(contracted.graph, budget), euler_genus(plus_graph(contracted), budget))
    return {"graph": write_tg6(tg), "edge": [u, w], "ok": before == after, "before": before, "after": after}


def _lemma_two_separated(rng: random.Random, budget: SolverBudget) -> Optional[dict]:
    g = _rand_part(rng, 4, 7, 15, extra=5)
    pairs = list(itertools.combinations(range(g.n), 2))
    tg = TerminalGraph(g, rng.choice(pairs))
    eg, egp = euler_genus(g, budget), euler_genus(plus_graph(tg), budget)
    theta = egp - eg
    ops = available_minor_ops(tg)
    veg, vegp = {}, {}
    for op in ops:
        h = apply_minor_op(tg, op)
        veg[op], vegp[op] = euler_genus(h.graph, budget), euler_genus(plus_graph(h), budget)

    def delta(values: dict, base: int, k: int) -> set:
        return {op for op in ops if values[op] <= base - k}

    ok = eg <= egp <= eg + 2
    for k in range(0, 4):
        ok &= delta(veg, eg, k + 2 - theta) <= delta(vegp, egp, k)
        ok &= delta(vegp, egp, k + theta) <= delta(veg, eg, k)
    return {"graph": write_tg6(tg), "ok": ok, "eg": eg, "eg_plus": egp}


def _lemma_ng_upper(rng: random.Random, budget: SolverBudget) -> Optional[dict]:
    g = _rand_part(rng, 3, 7, 17, cyclic=True)
    _, og, ng = genus_triple(g, budget)
    return {"graph": write_graph6(g).decode("ascii"), "ok": ng <= 2 * og + 1, "og": og, "ng": ng}


def _lemma_parity(rng: random.Random, budget: SolverBudget) -> Optional[dict]:
    n = rng.randint(5, 7)
    g = random_connected_graph(rng, n, _density(rng, n, 2 * n, 18))
    tg = _open_terminals(rng, g)
    if tg is None:
        return None
    egp, _, ngp = genus_triple(plus_graph(tg), budget)
    return {"graph": write_tg6(tg), "ok": egp % 2 == 0 or ngp == egp, "eg_plus": egp, "ng_plus": ngp}


def _one_sum_instance(rng: random.Random, cyclic: bool) -> tuple[SimpleGraph, SimpleGraph, SimpleGraph]:
    a, b = _rand_part(rng, 3, 6, 11, cyclic), _rand_part(rng, 3, 6, 11, cyclic)
    return a, b, one_sum(a, rng.randrange(a.n), b, rng.randrange(b.n))


def _lemma_blocks(rng: random.Random, budget: SolverBudget) -> Optional[dict]:
    _, _, g = _one_sum_instance(rng, cyclic=False)
    whole = euler_genus(g, budget, decompose=False)
    parts = [euler_genus(b, budget, decompose=False) for b in blocks(g)]
    return {"graph": write_graph6(g).decode("ascii"), "ok": whole == sum(parts), "eg": whole, "blocks": parts}


def _lemma_one_sum_ng(rng: random.Random, budget: SolverBudget) -> Optional[dict]:
    a, b, g = _one_sum_instance(rng, cyclic=True)
    (ea, _, na), (eb, _, nb) = genus_triple(a, budget), genus_triple(b, budget)
    eg, _, ng = genus_triple(g, budget, decompose=False)
    want_ng, want_sigma = one_sum_nonorientable((ea, na - ea), (eb, nb - eb))
    return {"graph": write_graph6(g).decode("ascii"), "ok": (ng, ng - eg) == (want_ng, want_sigma),
            "ng": ng, "predicted": want_ng}


_LEMMAS = {
    "cut-edge": _lemma_cut_edge,
    "two-separated": _lemma_two_separated,
    "ng-upper": _lemma_ng_upper,
    "parity": _lemma_parity,
    "block-additivity": _lemma_blocks,
    "one-sum-ng": _lemma_one_sum_ng,
}


def lemma_check(name: str, count: int, seed: int = 0, budget: SolverBudget = LEMMA_BUDGET) -> SweepReport:
    """Check one identity on ``count`` random instances that finish within
    ``budget``. Block additivity and the one-sum formula are evaluated on
    the whole graph without block decomposition, so the solver does not
    assume what is being tested."""
    check = _LEMMAS[name]
    rng = random.Random(f"{name}:{seed}")
    rep = SweepReport(name)
    t0 = time.monotonic()
    attempts = 0
    while rep.checked < count:
        attempts += 1
        if attempts > 3 * count + 100:
            raise RuntimeError(f"{name}: too few usable instances ({rep.checked} of {attempts})")
        try:
            row = check(rng, budget)
        except BudgetExceeded as exc:
            rep.unverified.append({"reason": str(exc)})
            continue
        if row is None:
            continue
        rep.checked += 1
        if not row.pop("ok"):
            rep.disagreements.append(row)
    rep.seconds = time.monotonic() - t0
    return rep
