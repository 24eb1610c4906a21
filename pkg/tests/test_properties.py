"""Property-based checks with hypothesis-generated graphs and schemes."""

import itertools

from hypothesis import given, settings, strategies as st

from genusforge.canon import canonical_form
from genusforge.embedding import (EmbeddingScheme, is_orientable, normalize_signature, scheme_euler_genus,
                                  trace_faces)
from genusforge.graph6 import parse_graph6, parse_sparse6, parse_tg6, write_graph6, write_sparse6, write_tg6
from genusforge.graphs import SimpleGraph, TerminalGraph, apply_minor_op, available_minor_ops
from genusforge.solver import GenusProfile, euler_genus, genus_triple
from genusforge.twosum import sum_parameters


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    picked = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph(n, picked)


@st.composite
def terminal_graphs(draw, max_n=8):
    g = draw(graphs(max_n).filter(lambda h: h.n >= 2))
    x, y = draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    return TerminalGraph(g, (x, y))


@st.composite
def schemes(draw, max_n=7):
    g = draw(graphs(max_n))
    rots = [draw(st.permutations(sorted(g.adjacency_sets[v]))) for v in range(g.n)]
    neg = [e for e in g.edges if draw(st.booleans())]
    return g, EmbeddingScheme(rots, neg)


@st.composite
def profiles(draw):
    eg = draw(st.integers(0, 6))
    eg_plus = eg + draw(st.integers(0, 2))
    sigma = draw(st.integers(0, 1))
    sigma_plus = draw(st.integers(0, 1))
    return GenusProfile(eg, (eg + 1) // 2, eg + sigma, eg_plus, eg_plus + sigma_plus)


def _relabel(g: SimpleGraph, perm: list[int]) -> SimpleGraph:
    return SimpleGraph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


@given(graphs(max_n=70))
@settings(max_examples=60, deadline=None)
def test_graph6_and_sparse6_round_trip(g):
    assert parse_graph6(write_graph6(g)) == g
    assert parse_sparse6(write_sparse6(g)) == g


@given(terminal_graphs())
def test_tg6_round_trip(t):
    assert parse_tg6(write_tg6(t)) == t


@given(graphs(), st.randoms(use_true_random=False))
@settings(deadline=None)
def test_canonical_form_ignores_labels(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_form(_relabel(g, perm)) == canonical_form(g)


@given(schemes())
@settings(deadline=None)
def test_face_lengths_cover_every_edge_twice(gs):
    g, s = gs
    assert trace_faces(g, s).total_length == 2 * g.m
    assert scheme_euler_genus(g, s) >= 0


@given(schemes())
@settings(deadline=None)
def test_normalizing_signs_keeps_the_surface(gs):
    g, s = gs
    t = normalize_signature(g, s)
    assert scheme_euler_genus(g, t) == scheme_euler_genus(g, s)
    assert is_orientable(g, t) == is_orientable(g, s)
    assert normalize_signature(g, t) == t


@given(profiles(), profiles())
def test_sum_parameters_identities(p1, p2):
    a, b = sum_parameters(p1, p2), sum_parameters(p2, p1)
    assert a == b
    assert a.predicted_theta == a.predicted_egp - a.predicted_eg
    assert a.predicted_eg <= p1.eg + p2.eg + 2
    assert a.predicted_sigma in (0, 1) and a.predicted_sigma_plus in (0, 1)


@given(st.one_of(graphs(), terminal_graphs()))
@settings(deadline=None)
def test_minor_operations_shrink(g):
    base = g.graph if isinstance(g, TerminalGraph) else g
    for op in available_minor_ops(g):
        h = apply_minor_op(g, op)
        hb = h.graph if isinstance(h, TerminalGraph) else h
        assert hb.m < base.m and base.n - 1 <= hb.n <= base.n


@given(graphs(max_n=6))
@settings(max_examples=40, deadline=None)
def test_genus_parameters_are_consistent(g):
    eg, og, ng = genus_triple(g)
    assert eg == euler_genus(g, decompose=False)
    assert eg <= 2 * og and eg <= ng <= 2 * og + 1
