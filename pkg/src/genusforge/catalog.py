"""Obstruction catalogs: building-block classes, certification of ingested
lists, and synthesis of the connectivity-2 obstructions for Euler genus 2."""

from __future__ import annotations

import itertools
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .canon import CanonicalForm, canonical_form, has_terminal_swap
from .criticality import (CASCADE, CRITICAL_EG, CRITICAL_EGP, EG, EGP, classify, decrease_set,
                          is_critical, operation_values, parameter_value)
from .embedding import is_orientable, scheme_euler_genus
from .graph6 import (Graph6Error, parse_graph6, parse_sparse6, write_graph6, write_lines, write_tg6)
from .graphs import (AnyGraph, GraphError, SimpleGraph, TerminalGraph, apply_minor_op, available_minor_ops,
                     complete_bipartite, complete_graph, components, connectivity, delete_edge, plus_graph, underlying,
                     xy_sum)
from .solver import (ANY, DEFAULT_BUDGET, NONORIENTABLE, BudgetExceeded, SolverBudget, euler_genus_at_most)

log = logging.getLogger(__name__)

CERTIFIED = "certified"
REFUTED = "refuted"
UNVERIFIED = "unverified"

EULER = "euler"
NONORIENTABLE_MODE = "nonorientable"

# file name and expected line count of each external data pack
PACKS = {
    "forb_n1": ("forb_n1.g6", 35),
    "estar1": ("estar1.g6", 103),
    "cascades_s1": ("cascades_s1.tg6", 21),
}

# counts the level-1 construction is expected to reproduce
CC1_COUNTS = {"eg": 195, "egp": 250, "egp_2conn": 227, "intersection": 95, "difference": 132}
SYNTHESIS_COUNTS = {"pairs": 744, "admissible": 723, "conn2_egp": 39, "conn2_cascades": 4,
                    "conn2_pairs": 125, "conn2_graphs": 70, "graphs": 668}


class CatalogError(RuntimeError):
    pass


class PackError(CatalogError):
    pass





@dataclass
class CatalogEntry:
    graph: AnyGraph
    canonical: CanonicalForm
    label: str
    provenance: str
    theta: Optional[int] = None

    @classmethod
    def make(cls, graph: AnyGraph, label: str, provenance: str, theta: Optional[int] = None) -> "CatalogEntry":
        return cls(graph, canonical_form(graph), label, provenance, theta)

    @property
    def key(self) -> tuple:
        return (self.canonical.canonical_bytes, self.canonical.terminal_class)

    @property
    def sort_key(self) -> tuple:
        g = underlying(self.graph)
        return (g.n, g.m, self.canonical.canonical_bytes, self.canonical.terminal_class)

    def line(self) -> str:
        if isinstance(self.graph, TerminalGraph):
            return write_tg6(self.graph)
        return write_graph6(self.graph).decode("ascii")


def dedupe(entries: Iterable[CatalogEntry]) -> list[CatalogEntry]:
    """First entry per isomorphism class, sorted by (n, m, canonical bytes)."""
    seen: dict[tuple, CatalogEntry] = {}
    for e in entries:
        seen.setdefault(e.key, e)
    return sorted(seen.values(), key=lambda e: e.sort_key)


# -- data packs ------------------------------------------------------------

@dataclass
class DataPack:
    name: str
    fmt: str  # "graph6" or "tg6"
    entries: list[AnyGraph]
    declared_count: Optional[int] = None
    declared_profiles: dict[int, tuple[int, ...]] = field(default_factory=dict)
    noncanonical_lines: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def strip_profiles(self) -> "DataPack":
        return DataPack(self.name, self.fmt, list(self.entries), self.declared_count, {}, list(self.noncanonical_lines))


def parse_pack(name: str, lines: Iterable[str], fmt: str, declared_count: Optional[int] = None) -> DataPack:
    """Parse pack lines: ``<graph6> [ints...]`` or ``<graph6> x y [ints...]``.

    Trailing integers are kept as declared profile hints. Lines whose
    re-encoding differs from the input are recorded, not rejected.
    """
    if fmt not in ("graph6", "tg6"):
        raise PackError(f"unknown pack format {fmt!r}")
    entries: list[AnyGraph] = []
    profiles = {}
    noncanonical = []
    for lineno, raw in enumerate(lines, 1):
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        head, *rest = raw.split()
        try:
            g = parse_sparse6(head) if head.startswith(":") else parse_graph6(head)
            nums = [int(t) for t in rest]
        except (Graph6Error, ValueError) as exc:
            raise PackError(f"{name}:{lineno}: {exc}") from exc
        if not head.startswith(":") and write_graph6(g).decode("ascii") != head:
            noncanonical.append(lineno)
        if fmt == "tg6":
            if len(nums) < 2:
                raise PackError(f"{name}:{lineno}: tg6 line needs two terminal labels")
            try:
                g = TerminalGraph(g, nums[:2])
            except GraphError as exc:
                raise PackError(f"{name}:{lineno}: {exc}") from exc
            nums = nums[2:]
        if nums:
            profiles[len(entries)] = tuple(nums)
        entries.append(g)
    pack = DataPack(name, fmt, entries, declared_count, profiles, noncanonical)
    if declared_count is not None and len(entries) != declared_count:
        raise PackError(f"pack {name} has {len(entries)} entries, expected {declared_count}")
    return pack


def load_pack(path: Union[str, Path], name: Optional[str] = None,
              declared_count: Optional[int] = None) -> DataPack:
    path = Path(path)
    fmt = "tg6" if path.suffix == ".tg6" else "graph6"
    return parse_pack(name or path.stem, path.read_text(encoding="utf-8").splitlines(), fmt, declared_count)


def find_packs(data_dir: Union[str, Path, None]) -> dict[str, DataPack]:
    """Load whichever of the known packs exist in ``data_dir``."""
    out: dict[str, DataPack] = {}
    if data_dir is None:
        return out
    for name, (fname, count) in PACKS.items():
        p = Path(data_dir) / fname
        if p.exists():
            out[name] = load_pack(p, name, count)
    return out


# -- certification ---------------------------------------------------------

@dataclass
class Certification:
    verdict: str
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == CERTIFIED


def _embeds(g: SimpleGraph, k: int, mode: str, budget: SolverBudget) -> bool:
    if mode == NONORIENTABLE_MODE:
        if g.m + len(components(g)) == g.n:
            return True  # forests embed in every surface
        return euler_genus_at_most(g, k, budget, mode=NONORIENTABLE) is not None
    return euler_genus_at_most(g, k, budget, mode=ANY) is not None


def certify_obstruction(h: SimpleGraph, k: int, mode: str = EULER,
                        budget: SolverBudget = DEFAULT_BUDGET) -> Certification:
    """Is ``h`` minor-minimal with Euler genus > k (``euler``) or with no
    embedding in the nonorientable surface of Euler genus k (``nonorientable``)?

    Isolated vertices refute minimality since deleting one keeps the graph
    non-embeddable.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if mode not in (EULER, NONORIENTABLE_MODE):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == NONORIENTABLE_MODE and k == 0:
        raise ValueError("there is no nonorientable surface of Euler genus 0")
    try:
        if _embeds(h, k, mode, budget):
            return Certification(REFUTED, f"embeds at level {k}")
        isolated = [v for v in range(h.n) if h.degree(v) == 0]
        if isolated:
            return Certification(REFUTED, f"isolated vertex {isolated[0]} can be deleted")
        seen = set()
        for op in available_minor_ops(h):
            m = apply_minor_op(h, op)
            key = canonical_form(m).canonical_bytes
            if key in seen:
                continue
            seen.add(key)
            if not _embeds(m, k, mode, budget):
                return Certification(REFUTED, f"minor {op} still does not embed")
    except BudgetExceeded as exc:
        return Certification(UNVERIFIED, str(exc))
    return Certification(CERTIFIED)


# -- critical classes ------------------------------------------------------

def _open_terminal_choices(h: SimpleGraph) -> list[tuple[TerminalGraph, str]]:
    return [(TerminalGraph(h, (x, y)), f"pair {x} {y}")
            for x, y in itertools.combinations(range(h.n), 2) if not h.has_edge(x, y)]


def _deleted_edge_choices(h: SimpleGraph) -> list[tuple[TerminalGraph, str]]:
    return [(TerminalGraph(delete_edge(h, e), e), f"deleted edge {e[0]} {e[1]}") for e in h.edges]


@dataclass
class CriticalClasses:
    level: int
    cc_eg: list[CatalogEntry]
    cc_egp: list[CatalogEntry]

    @property
    def cc_egp_2conn(self) -> list[CatalogEntry]:
        return [e for e in self.cc_egp if connectivity(plus_graph(e.graph)) >= 2]

    # intersection and difference are taken over the 2-connected part of
    # cc_egp, the only reading under which the published counts add up
    @property
    def intersection(self) -> list[CatalogEntry]:
        keys = {e.key for e in self.cc_eg}
        return [e for e in self.cc_egp_2conn if e.key in keys]

    @property
    def difference(self) -> list[CatalogEntry]:
        keys = {e.key for e in self.cc_eg}
        return [e for e in self.cc_egp_2conn if e.key not in keys]

    def klein_candidates(self, cascades: Sequence[CatalogEntry] = ()) -> list[CatalogEntry]:
        """cc_eg, the 2-connected part of cc_egp and the cascades, without repeats."""
        return dedupe(list(self.cc_eg) + self.difference + list(cascades))

    def counts(self) -> dict[str, int]:
        return {"eg": len(self.cc_eg), "egp": len(self.cc_egp), "egp_2conn": len(self.cc_egp_2conn),
                "intersection": len(self.intersection), "difference": len(self.difference)}


def build_critical_classes(level: int, obstructions: Sequence[SimpleGraph],
                           deletion_minimal: Sequence[SimpleGraph], source: str = "",
                           budget: SolverBudget = DEFAULT_BUDGET) -> CriticalClasses:
    """Critical terminal graphs with eg = level + 1 and with eg_plus = level + 1.

    The first class is grown from ``obstructions`` by choosing nonadjacent
    terminals; the second from ``deletion_minimal`` by choosing nonadjacent
    terminals or deleting an edge whose ends become terminals. Every
    candidate is tested by its own decrease sets; the lists only supply
    candidates.
    """
    cc_eg, cc_egp = [], []
    for i, h in enumerate(obstructions):
        for tg, how in _open_terminal_choices(h):
            if parameter_value(tg, EG, budget) == level + 1 and is_critical(tg, EG, budget):
                cc_eg.append(CatalogEntry.make(tg, CRITICAL_EG, f"{source}obstruction {i}, {how}",
                                               parameter_value(tg, EGP, budget) - level - 1))
    for i, h in enumerate(deletion_minimal):
        for tg, how in _open_terminal_choices(h) + _deleted_edge_choices(h):
            if parameter_value(tg, EGP, budget) == level + 1 and is_critical(tg, EGP, budget):
                theta = level + 1 - parameter_value(tg, EG, budget)
                cc_egp.append(CatalogEntry.make(tg, CRITICAL_EGP, f"{source}deletion-minimal {i}, {how}", theta))
    return CriticalClasses(level, dedupe(cc_eg), dedupe(cc_egp))


def kuratowski_graphs() -> list[SimpleGraph]:
    return [complete_graph(5), complete_bipartite(3, 3)]


def build_cc0(budget: SolverBudget = DEFAULT_BUDGET) -> tuple[list[CatalogEntry], list[CatalogEntry]]:
    """Level-0 classes from K5 and K3,3 (which are also the only
    deletion-minimal nonplanar graphs of minimum degree 3)."""
    k = kuratowski_graphs()
    classes = build_critical_classes(0, k, k, "kuratowski ", budget)
    cc_eg = classes.cc_eg
    cc_egp = sorted(classes.cc_egp, key=lambda e: (-e.theta, e.sort_key))
    if len(cc_eg) != 1 or len(cc_egp) != 3:
        raise CatalogError(f"level-0 classes have sizes {len(cc_eg)} and {len(cc_egp)}, expected 1 and 3")
    return cc_eg, cc_egp


def build_cc1(forb_n1: DataPack, estar1: DataPack, budget: SolverBudget = DEFAULT_BUDGET,
              expected: Optional[dict[str, int]] = None) -> CriticalClasses:
    """Level-1 classes from the projective-plane obstruction packs; counts are
    compared with ``expected`` (defaults to the published counts)."""
    for pack in (forb_n1, estar1):
        if pack.fmt != "graph6":
            raise PackError(f"pack {pack.name} must be plain graph6")
    classes = build_critical_classes(1, forb_n1.entries, estar1.entries, "", budget)
    counts = classes.counts()
    expected = CC1_COUNTS if expected is None else expected
    wrong = {k: (counts[k], v) for k, v in expected.items() if counts[k] != v}
    if wrong:
        raise CatalogError(f"level-1 class counts differ (got, expected): {wrong}")
    return classes


@dataclass
class IngestResult:
    accepted: list[CatalogEntry]
    rejected: list[tuple[str, str]]
    warnings: list[str]


def ingest_obstructions(pack: DataPack, k: int, modes: Sequence[str] = (EULER,),
                        budget: SolverBudget = DEFAULT_BUDGET) -> IngestResult:
    """Certify every graph of a pack as an obstruction at level ``k``."""
    acc, rej, warn = [], [], []
    for i, g in enumerate(pack.entries):
        g = underlying(g)
        for mode in modes:
            c = certify_obstruction(g, k, mode, budget)
            if not c.ok:
                rej.append((f"{pack.name}:{i} {write_graph6(g).decode('ascii')}", f"{mode}: {c.verdict} {c.reason}"))
                break
        else:
            acc.append(CatalogEntry.make(g, f"obstruction-{k}", f"{pack.name} line {i + 1}"))
    if len(dedupe(acc)) != len(acc):
        warn.append(f"{pack.name} contains isomorphic duplicates")
    return IngestResult(acc, rej, warn)


def ingest_cascades(pack: DataPack, budget: SolverBudget = DEFAULT_BUDGET,
                    expected_count: Optional[int] = 21, level: int = 1) -> IngestResult:
    """Certify each entry as a cascade with eg_plus = level + 1 and eg = level."""
    if pack.fmt != "tg6":
        raise PackError("cascade packs need terminals (tg6)")
    acc, rej, warn = [], [], []
    for i, tg in enumerate(pack.entries):
        name = f"{pack.name}:{i} {write_tg6(tg)}"
        if not tg.in_open_class or not tg.graph.is_connected():
            rej.append((name, "not a connected graph with nonadjacent terminals"))
            continue
        cls = classify(tg, budget)
        if not cls.classified:
            rej.append((name, f"unclassified: {cls.reason}"))
        elif CASCADE not in cls.flags:
            rej.append((name, f"not a cascade (flags {sorted(cls.flags)})"))
        elif cls.eg_plus != level + 1 or cls.eg != level:
            rej.append((name, f"cascade at the wrong level (eg={cls.eg}, eg_plus={cls.eg_plus})"))
        else:
            acc.append(CatalogEntry.make(tg, CASCADE, f"{pack.name} line {i + 1}", cls.theta))
    if expected_count is not None and len(acc) != expected_count:
        msg = f"{len(acc)} certified cascades, the full pack has {expected_count}"
        warn.append(msg)
        log.warning(msg)
    return IngestResult(acc, rej, warn)


# -- Klein bottle embeddings -----------------------------------------------

def check_klein_embeddability(entries: Sequence[CatalogEntry], budget: SolverBudget = DEFAULT_BUDGET,
                              bound: int = 2, cc_eg_keys: Optional[set] = None) -> dict:
    """For each entry find a nonorientable scheme of G+ with Euler genus <= bound
    and re-trace it; entries in ``cc_eg_keys`` also get theta = 0 and the
    decrease-set inclusion Δ2(eg) ⊆ Δ1(eg_plus) checked."""
    report = {"checked": 0, "embedded": 0, "failures": [], "unverified": [], "cc_eg_failures": []}
    for e in entries:
        tg = e.graph
        plus = plus_graph(tg)
        report["checked"] += 1
        try:
            scheme = euler_genus_at_most(plus, bound, budget, mode=NONORIENTABLE)
            if scheme is None or is_orientable(plus, scheme) or scheme_euler_genus(plus, scheme) > bound:
                report["failures"].append(e.line())
            else:
                report["embedded"] += 1
            if cc_eg_keys is not None and e.key in cc_eg_keys:
                ok = parameter_value(tg, EGP, budget) == parameter_value(tg, EG, budget)
                veg = operation_values(tg, EG, budget)
                d2 = decrease_set(tg, EG, 2, budget, veg)
                d1p = decrease_set(tg, EGP, 1, budget)
                if not ok or not d2.ops <= d1p.ops:
                    report["cc_eg_failures"].append(e.line())
        except BudgetExceeded:
            report["unverified"].append(e.line())
    return report


# -- synthesis -------------------------------------------------------------

@dataclass
class SumRecord:
    g1: int
    g2: int
    swap: bool
    eta: int
    emitted: str  # "sum" or "sum+"
    key: tuple


@dataclass
class SynthesisResult:
    g1_entries: list[CatalogEntry]
    g2_entries: list[CatalogEntry]
    pairs: int
    admissible: list[tuple[int, int]]
    records: list[SumRecord]
    catalog: list[CatalogEntry]


def synthesize(g1_entries: Sequence[CatalogEntry], g2_entries: Sequence[CatalogEntry],
               excluded: Optional[callable] = None, eta_cut: int = 2) -> SynthesisResult:
    """Form both xy-sums of every admissible pair and emit the sum itself
    when eta <= eta_cut and the sum with xy added otherwise.

    No genus is computed: theta annotations on the entries drive the choice.
    ``excluded(e1, e2)`` removes pairs.
    """
    for e in itertools.chain(g1_entries, g2_entries):
        if e.theta is None:
            raise CatalogError(f"entry {e.line()} has no theta annotation")
    pairs = len(g1_entries) * len(g2_entries)
    admissible = [(i, j) for i, e1 in enumerate(g1_entries) for j, e2 in enumerate(g2_entries)
                  if excluded is None or not excluded(e1, e2)]
    records = []
    found: dict[tuple, CatalogEntry] = {}
    for i, j in admissible:
        e1, e2 = g1_entries[i], g2_entries[j]
        eta = e1.theta + e2.theta
        for swap in (False, True):
            s = xy_sum(e1.graph, e2.graph, swap=swap)
            emitted, h = ("sum", s.graph) if eta <= eta_cut else ("sum+", plus_graph(s))
            entry = CatalogEntry.make(h, f"obstruction-from-{emitted}",
                                      f"{e1.label}[{e1.line()}] + {e2.label}[{e2.line()}] swap={int(swap)}")
            found.setdefault(entry.key, entry)
            records.append(SumRecord(i, j, swap, eta, emitted, entry.key))
    return SynthesisResult(list(g1_entries), list(g2_entries), pairs, admissible, records, dedupe(found.values()))


def synthesize_e2(cc0_egp: Sequence[CatalogEntry], cc1_egp_2conn: Sequence[CatalogEntry],
                  cascades: Sequence[CatalogEntry]) -> SynthesisResult:
    """Connectivity-2 obstructions for Euler genus 2: the K3,3 part is never
    paired with a cascade."""
    def excluded(e1: CatalogEntry, e2: CatalogEntry) -> bool:
        return e1.theta == 0 and e2.label == CASCADE

    return synthesize(cc0_egp, list(cc1_egp_2conn) + list(cascades), excluded)


def synthesis_census(result: SynthesisResult) -> dict:
    """Counts of pairs, identification collapse, connectivity-2 parts and graphs."""
    by_pair: dict[tuple[int, int], set] = defaultdict(set)
    for r in result.records:
        by_pair[(r.g1, r.g2)].add(r.key)
    collapsed = sum(1 for keys in by_pair.values() if len(keys) == 1)
    conn2 = [j for j, e in enumerate(result.g2_entries) if connectivity(plus_graph(e.graph)) == 2]
    conn2_by_label = Counter(result.g2_entries[j].label for j in conn2)
    conn2_set = set(conn2)
    conn2_pairs = [p for p in result.admissible if p[1] in conn2_set]
    conn2_graphs = set().union(*(by_pair[p] for p in conn2_pairs)) if conn2_pairs else set()
    emitted = Counter(r.emitted for r in result.records if not r.swap)
    eta_hist = Counter(r.eta for r in result.records if not r.swap)
    return {
        "pairs": result.pairs,
        "admissible": len(result.admissible),
        "g1_terminal_swap": [has_terminal_swap(e.graph) for e in result.g1_entries],
        "pairs_with_one_sum": collapsed,
        "conn2_egp": conn2_by_label.get(CRITICAL_EGP, 0),
        "conn2_cascades": conn2_by_label.get(CASCADE, 0),
        "conn2_pairs": len(conn2_pairs),
        "conn2_graphs": len(conn2_graphs),
        "emitted": dict(sorted(emitted.items())),
        "eta": {str(k): v for k, v in sorted(eta_hist.items())},
        "graphs": len(result.catalog),
    }


def census_line(census: dict) -> str:
    return f"pairs={census['pairs']} admissible={census['admissible']} graphs={census['graphs']}"


def write_catalog(result: SynthesisResult, out_dir: Union[str, Path], stem: str = "e2") -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g6 = out / f"{stem}_connectivity2.g6"
    write_lines(g6, (e.line() for e in result.catalog))
    census = synthesis_census(result)
    census["entries"] = [{"g6": e.line(), "provenance": e.provenance} for e in result.catalog]
    js = out / f"{stem}_census.json"
    js.write_text(json.dumps(census, indent=1) + "\n", encoding="utf-8")
    return g6, js


def verify_e2_equals_forb_n2(entries: Sequence[CatalogEntry], k: int = 2, sample: Optional[int] = 10,
                             budget: SolverBudget = DEFAULT_BUDGET) -> dict:
    """Certify the smallest ``sample`` entries both as Euler-genus-k critical
    graphs and as obstructions for the nonorientable surface of Euler genus k."""
    chosen = sorted(entries, key=lambda e: e.sort_key)
    if sample is not None:
        chosen = chosen[:sample]
    rows = []
    for e in chosen:
        g = underlying(e.graph)
        a = certify_obstruction(g, k, EULER, budget)
        b = certify_obstruction(g, k, NONORIENTABLE_MODE, budget)
        rows.append({"g6": e.line(), "euler": a.verdict, "nonorientable": b.verdict,
                     "agree": a.verdict == b.verdict})
    return {
        "checked": len(rows),
        "certified_both": sum(r["euler"] == CERTIFIED and r["nonorientable"] == CERTIFIED for r in rows),
        "disagreements": sum(not r["agree"] for r in rows),
        "unverified": sum(UNVERIFIED in (r["euler"], r["nonorientable"]) for r in rows),
        "rows": rows,
    }
