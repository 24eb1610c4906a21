"""Genus of 1-sums and 2-sums predicted from the parts, and solver cross-checks."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .graph6 import write_tg6
from .graphs import TerminalGraph, plus_graph, xy_sum
from .solver import (DEFAULT_BUDGET, BudgetExceeded, GenusProfile, SolverBudget, euler_genus,
                     genus_profile, genus_triple)


@dataclass(frozen=True)
class SumParameters:
    h0: int
    h1: int
    eta: int
    nh0: int
    nh1: int
    predicted_eg: int
    predicted_egp: int
    predicted_theta: int
    predicted_ng: int
    predicted_ngp: int
    predicted_sigma: int
    predicted_sigma_plus: int


def sum_parameters(p1: GenusProfile, p2: GenusProfile) -> SumParameters:
    """Parameters of the xy-sum of two connected parts, from their profiles alone."""
    h0 = p1.eg + p2.eg + 2
    h1 = p1.eg_plus + p2.eg_plus
    eta = p1.theta + p2.theta
    sigma_plus = p1.sigma_plus * p2.sigma_plus
    nh0 = h0
    nh1 = p1.eg_plus + p2.eg_plus + sigma_plus
    sigma = 0 if sigma_plus == 0 or eta >= 2 else 1
    return SumParameters(
        h0=h0, h1=h1, eta=eta, nh0=nh0, nh1=nh1,
        predicted_eg=min(h0, h1), predicted_egp=h1, predicted_theta=max(h1 - h0, 0),
        predicted_ng=min(nh0, nh1), predicted_ngp=nh1,
        predicted_sigma=sigma, predicted_sigma_plus=sigma_plus,
    )


def one_sum_euler(g1: int, g2: int) -> int:
    return g1 + g2


def one_sum_nonorientable(p1: tuple[int, int], p2: tuple[int, int]) -> tuple[int, int]:
    """``(eg, sigma)`` of each block -> ``(ng, sigma)`` of their 1-sum."""
    (e1, s1), (e2, s2) = p1, p2
    return e1 + e2 + s1 * s2, s1 * s2


def xy_edge_tight(p1: GenusProfile, p2: GenusProfile, q1: int, q2: int) -> bool:
    """Is the edge xy tight in the sum with xy added? ``q_i`` is the Euler
    genus of part i with its terminals identified."""
    if q1 > p1.eg_plus or q2 > p2.eg_plus:
        raise ValueError("identifying the terminals cannot raise the genus above that of G+")
    eta = p1.theta + p2.theta
    return eta > 2 and (q1 < p1.eg_plus or q2 < p2.eg_plus)


_EULER_FIELDS = (("eg", "predicted_eg"), ("eg_plus", "predicted_egp"), ("theta", "predicted_theta"))
_NONORI_FIELDS = (("ng", "predicted_ng"), ("ng_plus", "predicted_ngp"), ("sigma", "predicted_sigma"),
                  ("sigma_plus", "predicted_sigma_plus"))


def verify_richter(g1: TerminalGraph, g2: TerminalGraph, budget: SolverBudget = DEFAULT_BUDGET,
                   swap: bool = False, nonorientable: bool = True) -> dict:
    """Compare predicted sum parameters with values computed directly on the sum.

    The report's ``verdict`` is ``ok``, ``mismatch`` or ``unverified`` (budget
    exhausted). Only the parts' profiles go through the prediction; the sum
    itself is solved as a plain graph.
    """
    for part in (g1, g2):
        if not part.in_open_class or not part.graph.is_connected():
            raise ValueError("parts must be connected and must not contain the edge xy")
    report: dict = {"g1": write_tg6(g1), "g2": write_tg6(g2), "swap": swap}
    try:
        p1, p2 = genus_profile(g1, budget), genus_profile(g2, budget)
        pred = sum_parameters(p1, p2)
        s = xy_sum(g1, g2, swap=swap)
        plus = plus_graph(s)
        if nonorientable:
            eg, _, ng = genus_triple(s.graph, budget)
            eg_plus, _, ng_plus = genus_triple(plus, budget)
        else:
            eg, eg_plus = euler_genus(s.graph, budget), euler_genus(plus, budget)
        observed = {"eg": eg, "eg_plus": eg_plus, "theta": eg_plus - eg}
        if nonorientable:
            observed["ng"], observed["ng_plus"] = ng, ng_plus
            observed["sigma"] = observed["ng"] - observed["eg"]
            observed["sigma_plus"] = observed["ng_plus"] - observed["eg_plus"]
    except BudgetExceeded as exc:
        report.update(verdict="unverified", reason=str(exc))
        return report
    fields = _EULER_FIELDS + (_NONORI_FIELDS if nonorientable else ())
    mismatches = [name for name, key in fields if observed[name] != getattr(pred, key)]
    report.update(predicted=asdict(pred), observed=observed, mismatches=mismatches,
                  verdict="mismatch" if mismatches else "ok")
    return report


def sum_profile_prediction(g1: TerminalGraph, g2: TerminalGraph,
                           budget: SolverBudget = DEFAULT_BUDGET) -> Optional[SumParameters]:
    """Prediction only; None if a part profile could not be computed in budget."""
    try:
        return sum_parameters(genus_profile(g1, budget), genus_profile(g2, budget))
    except BudgetExceeded:
        return None
