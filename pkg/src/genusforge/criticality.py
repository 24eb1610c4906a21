"""Decrease sets, critical and tight subgraphs, and the building-block classes
of 2-sums (critical parts, cascades, hoppers, weak hoppers)."""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .canon import canonical_form
from .graph6 import write_tg6
from .graphs import (AnyGraph, Edge, MinorOperation, SimpleGraph, TerminalGraph,
                     apply_minor_op, available_minor_ops, norm_edge, plus_graph, underlying, xy_sum)
from .pools import random_terminal_graph
from .solver import (DEFAULT_BUDGET, BudgetExceeded, SolverBudget, euler_genus, euler_genus_at_most,
                     euler_genus_lower_bound, is_planar, nonorientable_genus)

EG = "eg"
EGP = "eg_plus"
NG = "ng"
PARAMETERS = (EG, EGP, NG)

CRITICAL_EG = "critical-eg"
CRITICAL_EGP = "critical-egp"
CASCADE = "cascade"
HOPPER_EG = "hopper-eg"
HOPPER_EGP = "hopper-egp"
WEAK_HOPPER_EG = "weak-hopper-eg"
WEAK_HOPPER_EGP = "weak-hopper-egp"
CLASS_NAMES = (CRITICAL_EG, CRITICAL_EGP, CASCADE, HOPPER_EG, HOPPER_EGP, WEAK_HOPPER_EG, WEAK_HOPPER_EGP)

# tight classes of the first part of a 2-sum, indexed by eta
_TIGHT_CLASSES = {
    0: frozenset({CRITICAL_EGP}),
    1: frozenset({CRITICAL_EGP, WEAK_HOPPER_EG}),
    2: frozenset({CRITICAL_EGP, CRITICAL_EG, CASCADE}),
    3: frozenset({CRITICAL_EG, WEAK_HOPPER_EGP}),
    4: frozenset({CRITICAL_EG}),
}


_VALUES: dict[tuple, int] = {}
_VALUES_LOCK = threading.Lock()


def clear_value_cache() -> None:
    with _VALUES_LOCK:
        _VALUES.clear()


def parameter_value(g: AnyGraph, parameter: str, budget: SolverBudget = DEFAULT_BUDGET) -> int:
    """Euler genus, Euler genus of G+, or nonorientable genus; memoized by isomorphism class."""
    if parameter == EGP:
        if not isinstance(g, TerminalGraph):
            raise ValueError("eg_plus needs a graph with terminals")
        form = canonical_form(g)
        key = (EGP, form.canonical_bytes, form.terminal_class)
    elif parameter in (EG, NG):
        key = (parameter, canonical_form(underlying(g)).canonical_bytes)
    else:
        raise ValueError(f"unknown parameter {parameter!r}")
    with _VALUES_LOCK:
        hit = _VALUES.get(key)
    if hit is not None:
        return hit
    if parameter == EG:
        value = euler_genus(underlying(g), budget)
    elif parameter == EGP:
        value = euler_genus(plus_graph(g), budget)
    else:
        value = nonorientable_genus(underlying(g), budget)
    with _VALUES_LOCK:
        _VALUES[key] = value
    return value


@dataclass(frozen=True)
class DecreaseSet:
    """Operations that lower ``parameter`` by at least ``k``."""

    parameter: str
    k: int
    base: int
    ops: frozenset[MinorOperation]

    def __contains__(self, op: MinorOperation) -> bool:
        return op in self.ops

    def __len__(self) -> int:
        return len(self.ops)


def operation_values(g: AnyGraph, parameter: str,
                     budget: SolverBudget = DEFAULT_BUDGET) -> dict[MinorOperation, int]:
    return {op: parameter_value(apply_minor_op(g, op), parameter, budget) for op in available_minor_ops(g)}


def decrease_set(g: AnyGraph, parameter: str, k: int, budget: SolverBudget = DEFAULT_BUDGET,
                 values: Optional[dict[MinorOperation, int]] = None) -> DecreaseSet:
    if k < 1:
        raise ValueError("k must be at least 1")
    base = parameter_value(g, parameter, budget)
    if values is None:
        values = operation_values(g, parameter, budget)
    return DecreaseSet(parameter, k, base, frozenset(op for op, v in values.items() if v <= base - k))


def is_critical(g: AnyGraph, parameter: str, budget: SolverBudget = DEFAULT_BUDGET) -> bool:
    """Every available minor-operation strictly lowers the parameter."""
    base = parameter_value(g, parameter, budget)
    return all(parameter_value(apply_minor_op(g, op), parameter, budget) < base
               for op in available_minor_ops(g))


def is_tight(whole: AnyGraph, part_edges: Iterable[Edge], parameter: str,
             budget: SolverBudget = DEFAULT_BUDGET) -> bool:
    """Every operation on an edge of the part lowers the parameter of the whole graph."""
    part = {norm_edge(*e) for e in part_edges}
    missing = part - underlying(whole).edge_set
    if missing:
        raise ValueError(f"edges {sorted(missing)} are not in the graph")
    base = parameter_value(whole, parameter, budget)
    ops = [op for op in available_minor_ops(whole) if op.edge in part]
    return all(parameter_value(apply_minor_op(whole, op), parameter, budget) < base for op in ops)


@dataclass
class PartClassification:
    tg6: str
    eg: int = -1
    eg_plus: int = -1
    flags: frozenset[str] = frozenset()
    levels: dict[str, int] = field(default_factory=dict)
    deltas: dict[str, list[int]] = field(default_factory=dict)
    classified: bool = True
    reason: str = ""

    @property
    def theta(self) -> int:
        return self.eg_plus - self.eg

    def as_dict(self) -> dict:
        out = {"tg6": self.tg6, "classified": self.classified}
        if not self.classified:
            out["reason"] = self.reason
            return out
        out.update(eg=self.eg, eg_plus=self.eg_plus, theta=self.theta, flags=sorted(self.flags),
                   levels=dict(sorted(self.levels.items())), deltas=self.deltas)
        return out


def _check_part(g: TerminalGraph) -> None:
    if not g.in_open_class:
        raise ValueError("the terminals must be nonadjacent")
    if not g.graph.is_connected():
        raise ValueError("the graph must be connected")


def class_flags(n_ops: int, d1eg: set, d2eg: set, d1egp: set, d2egp: set) -> frozenset[str]:
    """Class membership from the four decrease sets of a graph with ``n_ops`` operations."""
    full = lambda s: len(s) == n_ops  # noqa: E731
    c_eg, c_egp = full(d1eg), full(d1egp)
    flags = set()
    if c_eg:
        flags.add(CRITICAL_EG)
    if c_egp:
        flags.add(CRITICAL_EGP)
    if full(d1eg | d1egp) and not c_eg and not c_egp:
        flags.add(CASCADE)
    if full(d2eg):
        flags.add(HOPPER_EG)
    if full(d2egp):
        flags.add(HOPPER_EGP)
    if not c_egp and full(d1egp | d2eg):
        flags.add(WEAK_HOPPER_EG)
    if not c_eg and full(d1eg | d2egp):
        flags.add(WEAK_HOPPER_EGP)
    return frozenset(flags)


def classify(g: TerminalGraph, budget: SolverBudget = DEFAULT_BUDGET, max_eg_plus: int = 3) -> PartClassification:
    """Class flags and levels of a connected graph with nonadjacent terminals.

    Graphs with ``eg_plus > max_eg_plus`` or an exhausted budget come back
    with ``classified=False``.
    """
    _check_part(g)
    out = PartClassification(write_tg6(g))
    try:
        egp = parameter_value(g, EGP, budget)
        if egp > max_eg_plus:
            out.classified, out.reason = False, f"eg_plus={egp} exceeds cap {max_eg_plus}"
            return out
        eg = parameter_value(g, EG, budget)
        ops = available_minor_ops(g)
        veg = operation_values(g, EG, budget)
        vegp = operation_values(g, EGP, budget)
    except BudgetExceeded as exc:
        out.classified, out.reason = False, f"budget exhausted: {exc}"
        return out
    d = {
        "d1eg": {op for op in ops if veg[op] <= eg - 1},
        "d2eg": {op for op in ops if veg[op] <= eg - 2},
        "d1egp": {op for op in ops if vegp[op] <= egp - 1},
        "d2egp": {op for op in ops if vegp[op] <= egp - 2},
    }
    out.eg, out.eg_plus = eg, egp
    out.flags = class_flags(len(ops), **d)
    level_of = {CRITICAL_EG: eg, HOPPER_EG: eg, WEAK_HOPPER_EG: eg}
    out.levels = {f: level_of.get(f, egp) - 1 for f in out.flags}
    out.deltas = {name: [int(op in s) for op in ops] for name, s in d.items()}
    return out


def predicted_tight_classes(eta: int) -> frozenset[str]:
    """Classes a first part must belong to for it to be eg-tight in a sum with this eta."""
    if eta not in _TIGHT_CLASSES:
        raise ValueError("eta must be in 0..4")
    return _TIGHT_CLASSES[eta]


def predicted_decrease(eta: int, in_d1eg: bool, in_d2eg: bool, in_d1egp: bool, in_d2egp: bool) -> bool:
    """Does an operation on the first part lower the Euler genus of the sum?
    Decided from the operation's decrease-set memberships in the part alone."""
    if eta == 0:
        return in_d1egp
    if eta == 1:
        return in_d1egp or in_d2eg
    if eta == 2:
        return in_d1egp or in_d1eg
    if eta == 3:
        return in_d2egp or in_d1eg
    if eta == 4:
        return in_d1eg
    raise ValueError("eta must be in 0..4")


def _eta(g1: TerminalGraph, g2: TerminalGraph, budget: SolverBudget) -> int:
    return sum(parameter_value(g, EGP, budget) - parameter_value(g, EG, budget) for g in (g1, g2))


def check_part_lemma(g1: TerminalGraph, g2: TerminalGraph, op: MinorOperation,
                     budget: SolverBudget = DEFAULT_BUDGET, swap: bool = False) -> dict:
    """Compare both sides of the criteria for ``op`` to lower eg and eg_plus of the sum.

    One side is the solver on the modified sum, the other is decrease-set
    membership of ``op`` in the first part together with eta.
    """
    for part in (g1, g2):
        _check_part(part)
    if op not in available_minor_ops(g1):
        raise ValueError(f"{op} is not an operation of the first part")
    mg1 = apply_minor_op(g1, op)
    if not mg1.graph.is_connected():
        raise ValueError(f"{op} disconnects the first part")
    report: dict = {"g1": write_tg6(g1), "g2": write_tg6(g2), "op": str(op), "swap": swap}
    try:
        eta = _eta(g1, g2, budget)
        eg1, egp1 = parameter_value(g1, EG, budget), parameter_value(g1, EGP, budget)
        meg1, megp1 = parameter_value(mg1, EG, budget), parameter_value(mg1, EGP, budget)
        whole = xy_sum(g1, g2, swap=swap)
        mwhole = apply_minor_op(whole, op)
        observed_eg = parameter_value(mwhole, EG, budget) < parameter_value(whole, EG, budget)
        observed_egp = parameter_value(mwhole, EGP, budget) < parameter_value(whole, EGP, budget)
    except BudgetExceeded as exc:
        report.update(verdict="unverified", reason=str(exc))
        return report
    predicted_eg = predicted_decrease(eta, meg1 <= eg1 - 1, meg1 <= eg1 - 2, megp1 <= egp1 - 1, megp1 <= egp1 - 2)
    predicted_egp = megp1 <= egp1 - 1
    agree = predicted_eg == observed_eg and predicted_egp == observed_egp
    report.update(eta=eta, predicted_eg_drop=predicted_eg, observed_eg_drop=observed_eg,
                  predicted_egp_drop=predicted_egp, observed_egp_drop=observed_egp,
                  verdict="ok" if agree else "mismatch")
    return report


def check_general_eg(g1: TerminalGraph, g2: TerminalGraph, budget: SolverBudget = DEFAULT_BUDGET,
                     swap: bool = False) -> dict:
    """Tightness of the first part in the sum, computed directly, against the
    classes predicted from eta (for eg) and against eg_plus-criticality (for eg_plus)."""
    for part in (g1, g2):
        _check_part(part)
    report: dict = {"g1": write_tg6(g1), "g2": write_tg6(g2), "swap": swap}
    try:
        eta = _eta(g1, g2, budget)
        whole = xy_sum(g1, g2, swap=swap)
        tight_eg = is_tight(whole, g1.edges, EG, budget)
        tight_egp = is_tight(whole, g1.edges, EGP, budget)
        cls = classify(g1, budget, max_eg_plus=10**6)
    except BudgetExceeded as exc:
        report.update(verdict="unverified", reason=str(exc))
        return report
    if not cls.classified:
        report.update(verdict="unverified", reason=cls.reason)
        return report
    predicted_eg = bool(cls.flags & predicted_tight_classes(eta))
    predicted_egp = CRITICAL_EGP in cls.flags
    agree = predicted_eg == tight_eg and predicted_egp == tight_egp
    report.update(eta=eta, flags=sorted(cls.flags), predicted_eg_tight=predicted_eg, observed_eg_tight=tight_eg,
                  predicted_egp_tight=predicted_egp, observed_egp_tight=tight_egp,
                  verdict="ok" if agree else "mismatch")
    return report


# -- level-1 hopper search -------------------------------------------------

LEVEL_ONE_HOPPER_CLASSES = (HOPPER_EG, HOPPER_EGP, WEAK_HOPPER_EG, WEAK_HOPPER_EGP)


class _Capped:
    """min(Euler genus, cap), computed by the cheapest decisions that settle it."""

    def __init__(self, budget: SolverBudget):
        self.budget = budget
        self.memo: dict[bytes, tuple[int, bool]] = {}

    def __call__(self, g: SimpleGraph, cap: int) -> int:
        if cap <= 0 or g.m < 9 or is_planar(g):
            return 0
        key = canonical_form(g).canonical_bytes
        lo, exact = self.memo.get(key, (None, False))
        if lo is None:
            lo = max(1, euler_genus_lower_bound(g))
        if exact or lo >= cap:
            return min(lo, cap)
        for k in range(lo, cap):
            if euler_genus_at_most(g, k, self.budget) is not None:
                self.memo[key] = (k, True)
                return k
        self.memo[key] = (cap, False)
        return cap


def level_one_hopper_flags(g: TerminalGraph, budget: SolverBudget = DEFAULT_BUDGET,
                           rng: Optional[random.Random] = None) -> frozenset[str]:
    """Exact membership in the level-1 hopper and weak-hopper classes.

    Runs a per-operation elimination in which each class is dropped at the
    first operation violating its defining condition; values are only
    computed to the precision the surviving classes need.
    """
    _check_part(g)
    capped = _Capped(budget)
    plus = plus_graph(g)
    # every level-1 class has eg_plus >= 2
    egp = capped(plus, 3)
    if egp < 2:
        return frozenset()
    eg = capped(g.graph, 3)
    alive = set()
    if eg == 2:
        alive.update((HOPPER_EG, WEAK_HOPPER_EG))
        if egp == 3:
            egp = capped(plus, 5)
    if egp == 2:
        alive.update((HOPPER_EGP, WEAK_HOPPER_EGP))
    if not alive:
        return frozenset()
    ops = available_minor_ops(g)
    if rng is not None:
        rng.shuffle(ops)
    # the "not critical" side conditions of the weak classes
    not_c_eg = not_c_egp = False
    for op in ops:
        if not alive:
            return frozenset()
        h = apply_minor_op(g, op)
        hp = plus_graph(h)
        # exact min(value, need) comparisons via capped values
        e_at = lambda t: capped(h.graph, t + 1)  # noqa: E731
        p_at = lambda t: capped(hp, t + 1)  # noqa: E731
        if HOPPER_EG in alive and e_at(eg - 2) > eg - 2:
            alive.discard(HOPPER_EG)
        if HOPPER_EGP in alive and p_at(egp - 2) > egp - 2:
            alive.discard(HOPPER_EGP)
        if WEAK_HOPPER_EG in alive:
            drop1p = p_at(egp - 1) <= egp - 1
            if not drop1p:
                not_c_egp = True
            if not drop1p and e_at(eg - 2) > eg - 2:
                alive.discard(WEAK_HOPPER_EG)
        if WEAK_HOPPER_EGP in alive:
            drop1 = e_at(eg - 1) <= eg - 1
            if not drop1:
                not_c_eg = True
            if not drop1 and p_at(egp - 2) > egp - 2:
                alive.discard(WEAK_HOPPER_EGP)
    if WEAK_HOPPER_EG in alive and not not_c_egp:
        alive.discard(WEAK_HOPPER_EG)
    if WEAK_HOPPER_EGP in alive and not not_c_eg:
        alive.discard(WEAK_HOPPER_EGP)
    return frozenset(alive)


@dataclass
class HopperSearchReport:
    candidates: int = 0
    screened_planar: int = 0
    found: list[tuple[str, list[str]]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"candidates": self.candidates, "screened_planar": self.screened_planar,
                "found": [{"tg6": t, "classes": c} for t, c in self.found]}


def hopper_search(count: int, seed: int = 0, max_n: int = 8, min_n: int = 4,
                  budget: SolverBudget = DEFAULT_BUDGET) -> HopperSearchReport:
    """Random connected graphs with nonadjacent terminals, each tested for
    membership in the four level-1 hopper classes."""
    rng = random.Random(seed)
    rep = HopperSearchReport()
    while rep.candidates < count:
        n = rng.randint(min_n, max_n)
        top = n * (n - 1) // 2 - 1
        m = rng.randint(n - 1, top)
        g = random_terminal_graph(rng, n, m)
        rep.candidates += 1
        if g.m + 1 < 9:
            rep.screened_planar += 1
            continue
        flags = level_one_hopper_flags(g, budget, rng)
        if flags:
            rep.found.append((write_tg6(g), sorted(flags)))
    return rep
