"""Catalog machinery on level-0 analogs (K5 and K3,3 play the role of the
external packs)."""

import json

import pytest

from genusforge.catalog import (CASCADE, CC1_COUNTS, CERTIFIED, EULER, NONORIENTABLE_MODE, PACKS, REFUTED,
                                CatalogEntry, CatalogError, PackError, build_cc0, build_cc1,
                                build_critical_classes, certify_obstruction, check_klein_embeddability, dedupe,
                                find_packs, ingest_cascades, ingest_obstructions, kuratowski_graphs, load_pack,
                                parse_pack, synthesis_census, synthesize, synthesize_e2,
                                verify_e2_equals_forb_n2, write_catalog)
from genusforge.graph6 import write_graph6
from genusforge.graphs import (SimpleGraph, TerminalGraph, complete_bipartite, complete_graph, connectivity,
                               delete_edge, disjoint_union, underlying)
from genusforge.solver import euler_genus


@pytest.fixture(scope="module")
def cc0():
    return build_cc0()


def _pack_lines(graphs):
    return [write_graph6(g).decode() for g in graphs]


def test_certify_kuratowski_graphs(k5, k33):
    for g in (k5, k33):
        assert certify_obstruction(g, 0).verdict == CERTIFIED
        assert certify_obstruction(g, 1).verdict == REFUTED


def test_certify_refutations(k5):
    padded = disjoint_union(k5, SimpleGraph(1))
    c = certify_obstruction(padded, 0)
    assert c.verdict == REFUTED and "isolated" in c.reason
    c = certify_obstruction(complete_graph(6), 0)
    assert c.verdict == REFUTED and "still does not embed" in c.reason
    with pytest.raises(ValueError):
        certify_obstruction(k5, 0, NONORIENTABLE_MODE)
    with pytest.raises(ValueError):
        certify_obstruction(k5, 0, "torus")


def test_k7_on_the_klein_bottle():
    # K7 embeds in the torus, but K7 is a minimal non-embeddable graph for the Klein bottle
    k7 = complete_graph(7)
    c = certify_obstruction(k7, 2, EULER)
    assert c.verdict == REFUTED and "embeds" in c.reason
    assert certify_obstruction(k7, 2, NONORIENTABLE_MODE).verdict == CERTIFIED


def test_build_cc0(cc0):
    cc_eg, cc_egp = cc0
    assert len(cc_eg) == 1 and len(cc_egp) == 3
    assert [e.theta for e in cc_egp] == [1, 1, 0]
    assert underlying(cc_eg[0].graph).m == 9       # K3,3
    assert cc_egp[-1].key == cc_eg[0].key


def test_critical_classes_counts():
    k = kuratowski_graphs()
    classes = build_critical_classes(0, k, k)
    assert classes.counts() == {"eg": 1, "egp": 3, "egp_2conn": 3, "intersection": 1, "difference": 2}
    union = classes.klein_candidates()
    assert len(union) == 3 and {e.key for e in union} == {e.key for e in classes.cc_egp}


def test_cc1_count_check_uses_expected_counts(tmp_path):
    packs = [parse_pack(name, _pack_lines(kuratowski_graphs()), "graph6") for name in ("forb", "estar")]
    with pytest.raises(CatalogError):
        build_cc1(*packs)                         # level-1 counts are not met by K5 and K3,3
    zeros = {k: 0 for k in CC1_COUNTS}
    assert build_cc1(*packs, expected=zeros).counts() == zeros


def test_parse_pack_hints_and_encoding():
    lines = ["# comment", "D~{ 1 1 1", "E?Bw", ">>graph6<<Bw", ""]
    pack = parse_pack("p", lines, "graph6")
    assert len(pack) == 3
    assert pack.declared_profiles == {0: (1, 1, 1)}
    assert pack.noncanonical_lines == [4]
    assert pack.strip_profiles().declared_profiles == {}
    with pytest.raises(PackError):
        parse_pack("p", ["D~{"], "graph6", declared_count=2)
    with pytest.raises(PackError):
        parse_pack("p", ["D~"], "graph6")
    with pytest.raises(PackError):
        parse_pack("p", ["D~{ 0"], "tg6")
    with pytest.raises(PackError):
        parse_pack("p", ["D~{"], "json")


def test_find_and_load_packs(tmp_path):
    assert find_packs(tmp_path) == {}
    assert find_packs(None) == {}
    fname, _ = PACKS["cascades_s1"]
    (tmp_path / fname).write_text("Bw 0 1\n")
    with pytest.raises(PackError):
        find_packs(tmp_path)                      # declared count is 21
    p = load_pack(tmp_path / fname)
    assert p.fmt == "tg6" and isinstance(p.entries[0], TerminalGraph)


def test_ingest_obstructions():
    pack = parse_pack("s0", _pack_lines(kuratowski_graphs() + [complete_graph(6)]), "graph6")
    res = ingest_obstructions(pack, 0)
    assert len(res.accepted) == 2
    assert len(res.rejected) == 1 and "still does not embed" in res.rejected[0][1]


def test_ingest_cascades_rejects_non_cascades(k5_minus_e, k33_open):
    pack = parse_pack("c", ["D^{ 0 1", "EFz_ 0 1", "D~{ 0 1"], "tg6")
    res = ingest_cascades(pack, expected_count=3)
    assert res.accepted == []
    reasons = [why for _, why in res.rejected]
    assert any("not a cascade" in r for r in reasons)
    assert any("nonadjacent" in r for r in reasons)
    assert res.warnings
    with pytest.raises(PackError):
        ingest_cascades(parse_pack("g", ["D~{"], "graph6"))


def test_klein_check_level_zero(cc0):
    cc_eg, cc_egp = cc0
    rep = check_klein_embeddability(cc_egp, bound=1, cc_eg_keys={e.key for e in cc_eg})
    assert rep["checked"] == 3 and rep["embedded"] == 3
    assert rep["failures"] == [] and rep["cc_eg_failures"] == []
    # the plus graphs are nonplanar, so nothing embeds below
    assert check_klein_embeddability(cc_egp, bound=0)["embedded"] == 0


def test_synthesis_level_zero(cc0, tmp_path):
    _, cc_egp = cc0
    result = synthesize(cc_egp, cc_egp)
    census = synthesis_census(result)
    assert census["pairs"] == census["admissible"] == 9
    assert census["graphs"] == len(result.catalog) == 6
    assert all(census["g1_terminal_swap"])
    assert census["pairs_with_one_sum"] == 9
    for e in result.catalog:
        g = underlying(e.graph)
        assert connectivity(g) == 2
        assert euler_genus(g) == 2
    g6, js = write_catalog(result, tmp_path)
    assert len(g6.read_text().splitlines()) == 6
    assert json.loads(js.read_text())["graphs"] == 6


def test_synthesized_level_zero_catalog_is_certified(cc0):
    _, cc_egp = cc0
    result = synthesize(cc_egp, cc_egp)
    rep = verify_e2_equals_forb_n2(result.catalog, k=1, sample=None)
    assert rep["checked"] == 6
    assert rep["certified_both"] == 6 and rep["disagreements"] == 0


def test_cascade_pairing_is_excluded_for_theta_zero(cc0):
    _, cc_egp = cc0
    fake = [CatalogEntry.make(e.graph, CASCADE, "test", e.theta) for e in cc_egp]
    result = synthesize_e2(cc_egp, [], fake)
    # only the K3,3 part (theta 0) is kept away from cascades
    assert result.pairs == 9 and len(result.admissible) == 6
    assert all(cc_egp[i].theta != 0 for i, _ in result.admissible)


def test_synthesis_needs_theta():
    e = CatalogEntry.make(TerminalGraph(complete_bipartite(3, 3), (0, 1)), "x", "test")
    with pytest.raises(CatalogError):
        synthesize([e], [e])


def test_dedupe_orders_and_merges(k33_open):
    a = CatalogEntry.make(k33_open, "a", "1")
    b = CatalogEntry.make(TerminalGraph(complete_bipartite(3, 3), (3, 4)), "b", "2")
    c = CatalogEntry.make(TerminalGraph(delete_edge(complete_graph(5), (0, 1)), (0, 1)), "c", "3")
    out = dedupe([a, b, c])
    assert [e.label for e in out] == ["c", "a"]
