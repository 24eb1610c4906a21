"""Command-line front end: ``genusforge <subcommand> ...``.

Machine output is one JSON value per line; ``--human`` switches to aligned
text. Exit codes: 0 success, 1 a refuted or mismatching verdict, 2 usage or
input errors, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable, Optional, TextIO

from . import __version__
from .catalog import (CERTIFIED, EULER, NONORIENTABLE_MODE, REFUTED, CatalogEntry, CatalogError,
                      build_cc0, build_cc1, certify_obstruction, check_klein_embeddability, find_packs,
                      ingest_cascades, synthesis_census, synthesize, synthesize_e2, verify_e2_equals_forb_n2,
                      write_catalog, census_line)
from .criticality import (CASCADE, CRITICAL_EG, CRITICAL_EGP, EG, EGP, HOPPER_EG, HOPPER_EGP, classify,
                          is_critical)
from .embedding import scheme_euler_genus
from .graph6 import Graph6Error, parse_graph6, parse_sparse6, parse_tg6, write_tg6
from .graphs import GraphError, SimpleGraph, TerminalGraph, components, connectivity, underlying, xy_sum
from .pools import terminal_pool
from .solver import (ANY, NONORIENTABLE, ORIENTABLE, BudgetExceeded, ProfileCache, SolverBudget,
                     default_cache_path, euler_genus_at_most, genus_profile, genus_triple, set_profile_cache)
from .sweeps import parts_sweep, richter_sweep
from .twosum import sum_parameters

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

CHECK_CLASSES = (CRITICAL_EG, CRITICAL_EGP, CASCADE, "hopper", "obstruction:K")
SUITES = ("richter", "parts", "general", "klein", "e2-sample")


class UsageError(Exception):
    pass


class Output:
    """Collects rows and prints them as JSON lines or as an aligned table."""

    def __init__(self, human: bool, stream: TextIO):
        self.human = human
        self.stream = stream
        self.rows: list = []

    def emit(self, row) -> None:
        if self.human:
            self.rows.append(row)
        else:
            print(json.dumps(row, separators=(",", ":")), file=self.stream, flush=True)

    def text(self, line: str) -> None:
        """Free-form summary line, printed as is in both modes."""
        self.flush()
        print(line, file=self.stream, flush=True)

    def flush(self) -> None:
        if not self.rows:
            return
        dict_rows = [r for r in self.rows if isinstance(r, dict)]
        if len(dict_rows) != len(self.rows):
            for r in self.rows:
                print(r if not isinstance(r, dict) else _flat(r), file=self.stream)
        else:
            cols = list(dict.fromkeys(k for r in dict_rows for k in r))
            cells = [[_cell(r.get(c, "")) for c in cols] for r in dict_rows]
            widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
            print("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip(), file=self.stream)
            for row in cells:
                print("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip(), file=self.stream)
        self.stream.flush()
        self.rows.clear()


def _cell(v) -> str:
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _flat(row: dict) -> str:
    return " ".join(f"{k}={_cell(v)}" for k, v in row.items())


# -- input -----------------------------------------------------------------

def _lines(path: str) -> Iterable[tuple[int, str]]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    for i, raw in enumerate(text.splitlines(), 1):
        raw = raw.strip()
        if raw and not raw.startswith("#"):
            yield i, raw


def _parse_any(raw: str) -> SimpleGraph | TerminalGraph:
    """graph6, sparse6, or graph6 followed by two terminal labels."""
    tokens = raw.split()
    if len(tokens) == 3:
        return parse_tg6(raw)
    if len(tokens) != 1:
        raise Graph6Error(f"expected a graph6 line with optional terminals, got {raw!r}")
    return parse_sparse6(raw) if raw.startswith(":") else parse_graph6(raw)


def read_graphs(path: str) -> list[tuple[str, SimpleGraph | TerminalGraph]]:
    try:
        out = []
        for lineno, raw in _lines(path):
            try:
                out.append((raw, _parse_any(raw)))
            except (Graph6Error, GraphError) as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from exc
        return out
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def read_terminal_graphs(path: str) -> list[tuple[str, TerminalGraph]]:
    out = []
    for raw, g in read_graphs(path):
        if not isinstance(g, TerminalGraph):
            raise UsageError(f"{path}: line {raw!r} has no terminals (expected '<graph6> <x> <y>')")
        out.append((raw, g))
    return out


# -- subcommands -----------------------------------------------------------

def cmd_genus(args, out: Output, budget: SolverBudget) -> int:
    mode = ORIENTABLE if args.orientable else NONORIENTABLE if args.nonorientable else ANY
    code = EXIT_OK
    for raw, g in read_graphs(args.file):
        g = underlying(g)
        try:
            if args.at_most is None:
                eg, og, ng = genus_triple(g, budget)
                if mode == ORIENTABLE:
                    value = og
                elif mode == NONORIENTABLE:
                    value = ng if g.m >= g.n - len(components(g)) + 1 else None
                else:
                    value = eg
                out.emit({"graph": raw, "genus": value} if args.human else value)
                continue
            scheme = euler_genus_at_most(g, args.at_most, budget, mode=mode)
        except BudgetExceeded as exc:
            out.emit({"graph": raw, "verdict": "unverified", "reason": str(exc)})
            code = EXIT_BUDGET
            continue
        row = {"graph": raw, "k": args.at_most, "verdict": "yes" if scheme is not None else "no"}
        if scheme is not None:
            row["euler_genus"] = scheme_euler_genus(g, scheme)
            if args.show_scheme:
                row["scheme"] = scheme.dump()
        out.emit(row)
    return code


def cmd_profile(args, out: Output, budget: SolverBudget) -> int:
    code = EXIT_OK
    for raw, tg in read_terminal_graphs(args.file):
        try:
            p = genus_profile(tg, budget)
        except BudgetExceeded as exc:
            out.emit({"tg6": raw, "verdict": "unverified", "reason": str(exc)})
            code = EXIT_BUDGET
            continue
        out.emit({"tg6": raw, **p.as_dict()})
    return code


def _check_one(g, cls: str, args, budget: SolverBudget) -> dict:
    if cls.startswith("obstruction:"):
        try:
            k = int(cls.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad class {cls!r}; use obstruction:K with an integer K") from exc
        mode = NONORIENTABLE_MODE if args.nonorientable else EULER
        c = certify_obstruction(underlying(g), k, mode, budget)
        return {"verdict": c.verdict, "reason": c.reason} if c.reason else {"verdict": c.verdict}
    if not isinstance(g, TerminalGraph):
        raise UsageError(f"class {cls} needs terminals ('<graph6> <x> <y>')")
    if cls in (CRITICAL_EG, CRITICAL_EGP):
        ok = is_critical(g, EG if cls == CRITICAL_EG else EGP, budget)
        return {"verdict": CERTIFIED if ok else REFUTED}
    try:
        c = classify(g, budget, max_eg_plus=10**6)
    except ValueError as exc:
        return {"verdict": REFUTED, "reason": str(exc)}
    if not c.classified:
        raise BudgetExceeded(c.reason)
    wanted = {CASCADE: {CASCADE}, "hopper": {HOPPER_EG, HOPPER_EGP}}[cls]
    return {"verdict": CERTIFIED if c.flags & wanted else REFUTED, "flags": sorted(c.flags),
            "eg": c.eg, "eg_plus": c.eg_plus}


def cmd_check(args, out: Output, budget: SolverBudget) -> int:
    cls = args.cls
    if cls not in (CRITICAL_EG, CRITICAL_EGP, CASCADE, "hopper") and not cls.startswith("obstruction:"):
        raise UsageError(f"unknown class {cls!r}; choose from {', '.join(CHECK_CLASSES)}")
    code = EXIT_OK
    for raw, g in read_graphs(args.file):
        try:
            row = {"graph": raw, "class": cls, **_check_one(g, cls, args, budget)}
        except BudgetExceeded as exc:
            row = {"graph": raw, "class": cls, "verdict": "unverified", "reason": str(exc)}
        if row["verdict"] == REFUTED:
            code = EXIT_FAIL
        elif row["verdict"] != CERTIFIED and code == EXIT_OK:
            code = EXIT_BUDGET
        out.emit(row)
    return code


def cmd_compose(args, out: Output, budget: SolverBudget) -> int:
    left, right = read_terminal_graphs(args.a), read_terminal_graphs(args.b)
    for raw, tg in left + right:
        if not tg.in_open_class or not tg.graph.is_connected():
            raise UsageError(f"{raw!r}: parts must be connected with nonadjacent terminals")
    code = EXIT_OK
    swaps = (False, True) if args.both_identifications else (False,)
    for ra, a in left:
        for rb, b in right:
            try:
                pred = sum_parameters(genus_profile(a, budget), genus_profile(b, budget))
            except BudgetExceeded as exc:
                out.emit({"g1": ra, "g2": rb, "verdict": "unverified", "reason": str(exc)})
                code = EXIT_BUDGET
                continue
            for swap in swaps:
                s = xy_sum(a, b, swap=swap)
                out.emit({"g1": ra, "g2": rb, "swap": swap, "sum": write_tg6(s),
                          "eg": pred.predicted_eg, "eg_plus": pred.predicted_egp,
                          "theta": pred.predicted_theta, "ng": pred.predicted_ng,
                          "ng_plus": pred.predicted_ngp, "sigma": pred.predicted_sigma,
                          "sigma_plus": pred.predicted_sigma_plus, "eta": pred.eta})
    return code


def _require_packs(data_dir: Optional[str], names: Iterable[str]) -> dict:
    if data_dir is None:
        raise UsageError("--data-dir is required")
    if not Path(data_dir).is_dir():
        raise UsageError(f"data directory {data_dir} does not exist")
    packs = find_packs(data_dir)
    missing = [n for n in names if n not in packs]
    if missing:
        raise UsageError(f"missing data packs in {data_dir}: {', '.join(missing)}")
    return packs


def _cc1_and_cascades(data_dir: str, budget: SolverBudget, out: Output):
    packs = _require_packs(data_dir, ("forb_n1", "estar1", "cascades_s1"))
    for p in packs.values():
        if p.noncanonical_lines:
            out.text(f"warning: {p.name} has {len(p.noncanonical_lines)} lines with a non-standard encoding")
    cc1 = build_cc1(packs["forb_n1"], packs["estar1"], budget)
    cascades = ingest_cascades(packs["cascades_s1"], budget)
    for w in cascades.warnings:
        out.text(f"warning: {w}")
    return cc1, cascades


def cmd_synthesize(args, out: Output, budget: SolverBudget) -> int:
    if args.out is None:
        raise UsageError("--out is required")
    _, cc0_egp = build_cc0(budget)
    cc1, cascades = _cc1_and_cascades(args.data_dir, budget, out)
    if cascades.rejected:
        for name, why in cascades.rejected:
            out.emit({"rejected": name, "reason": why})
        return EXIT_FAIL
    result = synthesize_e2(cc0_egp, cc1.cc_egp_2conn, cascades.accepted)
    g6_path, json_path = write_catalog(result, args.out)
    census = synthesis_census(result)
    out.emit({"catalog": str(g6_path), "census": str(json_path), "level1": cc1.counts(),
              **{k: v for k, v in census.items() if k != "g1_terminal_swap"}})
    out.text(census_line(census))
    return EXIT_OK


def _verify_sweep(args, out: Output, budget: SolverBudget) -> int:
    pool = terminal_pool(args.max_n, args.max_m)
    if args.suite == "richter":
        reps = [richter_sweep(pool, nonorientable=not args.euler_only, budget=budget, jobs=args.jobs)]
    else:
        lemma, general = parts_sweep(pool, budget, jobs=args.jobs)
        reps = [lemma if args.suite == "parts" else general]
    code = EXIT_OK
    for rep in reps:
        out.emit({"pool": len(pool), **rep.as_dict()})
        out.text(f"disagreements={len(rep.disagreements)}")
        if rep.disagreements:
            code = EXIT_FAIL
        elif rep.unverified:
            code = max(code, EXIT_BUDGET)
    return code


def _level_entries(args, out: Output, budget: SolverBudget):
    """Catalog to verify: a file given with --catalog, else a fresh synthesis
    from --data-dir, else the level-0 analog built from K5 and K3,3."""
    if args.catalog:
        return [CatalogEntry.make(underlying(g), "catalog", f"{args.catalog}:{raw}")
                for raw, g in read_graphs(args.catalog)], 2, "catalog"
    _, cc0_egp = build_cc0(budget)
    if args.data_dir:
        cc1, cascades = _cc1_and_cascades(args.data_dir, budget, out)
        result = synthesize_e2(cc0_egp, cc1.cc_egp_2conn, cascades.accepted)
        return result.catalog, 2, "level-1"
    return synthesize(cc0_egp, cc0_egp).catalog, 1, "level-0"


def cmd_verify(args, out: Output, budget: SolverBudget) -> int:
    if args.suite in ("richter", "parts", "general"):
        return _verify_sweep(args, out, budget)
    if args.suite == "klein":
        if args.data_dir:
            cc1, cascades = _cc1_and_cascades(args.data_dir, budget, out)
            entries, bound, level = cc1.klein_candidates(cascades.accepted), 2, "level-1"
            keys = {e.key for e in cc1.cc_eg}
        else:
            cc0_eg, cc0_egp = build_cc0(budget)
            entries, bound, level, keys = cc0_egp, 1, "level-0", {e.key for e in cc0_eg}
        rep = check_klein_embeddability(entries, budget, bound=bound, cc_eg_keys=keys)
        out.emit({"suite": "klein", "source": level, "bound": bound, **rep})
        out.text(f"disagreements={len(rep['failures']) + len(rep['cc_eg_failures'])}")
        if rep["failures"] or rep["cc_eg_failures"]:
            return EXIT_FAIL
        return EXIT_BUDGET if rep["unverified"] else EXIT_OK
    entries, k, level = _level_entries(args, out, budget)
    rep = verify_e2_equals_forb_n2(entries, k=k, sample=args.sample, budget=budget)
    out.emit({"suite": "e2-sample", "source": level, "k": k,
              **{key: v for key, v in rep.items() if key != "rows"}})
    out.flush()
    for row in rep["rows"]:
        out.emit(row)
    out.text(f"disagreements={rep['disagreements']}")
    if rep["disagreements"] or rep["certified_both"] + rep["unverified"] < rep["checked"]:
        return EXIT_FAIL
    return EXIT_BUDGET if rep["unverified"] else EXIT_OK


def cmd_census(args, out: Output, budget: SolverBudget) -> int:
    path = Path(args.catalog)
    if path.is_dir():
        found = sorted(path.glob("*_census.json"))
        if not found:
            raise UsageError(f"no *_census.json in {path}")
        path = found[0]
    if path.suffix == ".json":
        try:
            census = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read census {path}: {exc}") from exc
        out.emit({k: v for k, v in census.items() if k not in ("entries", "g1_terminal_swap")})
        out.text(census_line(census))
        return EXIT_OK
    graphs = [underlying(g) for _, g in read_graphs(str(path))]
    by_conn: dict[int, int] = {}
    for g in graphs:
        c = connectivity(g)
        by_conn[c] = by_conn.get(c, 0) + 1
    out.emit({"catalog": str(path), "graphs": len(graphs),
              "connectivity": {str(k): v for k, v in sorted(by_conn.items())},
              "vertices": [min((g.n for g in graphs), default=0), max((g.n for g in graphs), default=0)],
              "edges": [min((g.m for g in graphs), default=0), max((g.m for g in graphs), default=0)]})
    out.text(f"graphs={len(graphs)}")
    return EXIT_OK


# -- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="aligned text instead of JSON lines")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--node-limit", type=int, default=10**8, help="search nodes per solve")
    common.add_argument("--time-limit", type=float, default=300.0, help="seconds per solve")
    common.add_argument("--cache", default=None,
                        help="profile cache file (default: $GENUSFORGE_CACHE or ~/.cache/genusforge)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the profile cache")

    p = argparse.ArgumentParser(prog="genusforge", description="Exact graph genus and 2-sum catalogs.")
    p.add_argument("--version", action="version", version=f"genusforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    g = sub.add_parser("genus", parents=[common], help="genus of each graph in a graph6 file")
    g.add_argument("file")
    which = g.add_mutually_exclusive_group()
    which.add_argument("--orientable", action="store_true")
    which.add_argument("--nonorientable", action="store_true")
    g.add_argument("--at-most", type=int, metavar="K", help="decide Euler genus <= K instead")
    g.add_argument("--show-scheme", action="store_true", help="with --at-most, include the scheme dump")

    pr = sub.add_parser("profile", parents=[common], help="genus profile of each terminal graph")
    pr.add_argument("file")

    c = sub.add_parser("check", parents=[common], help="certify class membership")
    c.add_argument("file")
    c.add_argument("--class", dest="cls", required=True, metavar="CLASS",
                   help=f"one of {', '.join(CHECK_CLASSES)}")
    c.add_argument("--nonorientable", action="store_true",
                   help="with obstruction:K, use the nonorientable surface of Euler genus K")

    co = sub.add_parser("compose", parents=[common], help="xy-sums with predicted parameters")
    co.add_argument("a")
    co.add_argument("b")
    co.add_argument("--both-identifications", action="store_true")

    s = sub.add_parser("synthesize", parents=[common], help="build the connectivity-2 catalog")
    s.add_argument("--data-dir")
    s.add_argument("--out")

    v = sub.add_parser("verify", parents=[common], help="run a verification harness")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--max-n", type=int, default=6, help="sweep pool: vertices")
    v.add_argument("--max-m", type=int, default=9, help="sweep pool: edges")
    v.add_argument("--euler-only", action="store_true", help="richter: skip nonorientable values")
    v.add_argument("--data-dir", help="klein/e2-sample: data packs (else the level-0 analog)")
    v.add_argument("--catalog", help="e2-sample: catalog file to certify")
    v.add_argument("--sample", type=int, default=10, help="e2-sample: entries to certify")

    ce = sub.add_parser("census", parents=[common], help="count report for a catalog")
    ce.add_argument("catalog", help="census JSON, catalog graph6 file, or output directory")
    return p


COMMANDS = {
    "genus": cmd_genus, "profile": cmd_profile, "check": cmd_check, "compose": cmd_compose,
    "synthesize": cmd_synthesize, "verify": cmd_verify, "census": cmd_census,
}


def main(argv: Optional[list[str]] = None, stdout: Optional[TextIO] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    stdout = stdout or sys.stdout
    out = Output(args.human, stdout)
    try:
        budget = SolverBudget(node_limit=args.node_limit, time_limit=args.time_limit)
        if args.jobs < 1:
            raise ValueError("--jobs must be positive")
    except ValueError as exc:
        print(f"genusforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cache = None if args.no_cache else ProfileCache(args.cache or default_cache_path())
    if cache is not None:
        set_profile_cache(cache)
    try:
        code = COMMANDS[args.command](args, out, budget)
    except UsageError as exc:
        out.flush()
        print(f"genusforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatalogError as exc:
        out.flush()
        print(f"genusforge: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BudgetExceeded as exc:
        out.flush()
        print(f"genusforge: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    finally:
        if cache is not None:
            try:
                cache.flush()
            except OSError as exc:
                print(f"genusforge: cannot write profile cache: {exc}", file=sys.stderr)
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
