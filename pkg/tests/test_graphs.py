import random

import pytest

from genusforge.canon import is_isomorphic
from genusforge.graphs import (GraphError, MinorOperation, OpKind, SimpleGraph, TerminalGraph, add_terminal_edge,
                               apply_minor_op, available_minor_ops, blocks, complete_bipartite, complete_graph,
                               connectivity, cut_edges, cycle_graph, delete_edge, identify_terminals, one_sum,
                               path_graph, plus_graph, two_core, xy_bridges, xy_sum)
from genusforge.pools import random_terminal_graph


def test_operation_counts(k33_open):
    assert len(available_minor_ops(complete_graph(3))) == 6
    assert len(available_minor_ops(TerminalGraph(complete_graph(3), (0, 1)))) == 5
    assert len(available_minor_ops(k33_open)) == 18


def test_k5_delete_and_contract(k5):
    for e in k5.edges:
        d = apply_minor_op(k5, MinorOperation(e, OpKind.DELETE))
        assert (d.n, d.m) == (5, 9)
        c = apply_minor_op(k5, MinorOperation(e, OpKind.CONTRACT))
        assert c == complete_graph(4)


def test_contraction_at_terminal_keeps_terminal(k33_open):
    # vertex 0 is a terminal, 3 is on the other side
    h = apply_minor_op(k33_open, MinorOperation((0, 3), OpKind.CONTRACT))
    assert isinstance(h, TerminalGraph) and h.n == 5
    assert h.terminals == (0, 1)
    assert h.graph.has_edge(0, 1)  # the merged vertex is now adjacent to y


def test_terminal_edge_cannot_be_contracted():
    tg = TerminalGraph(complete_graph(3), (0, 1))
    with pytest.raises(GraphError):
        apply_minor_op(tg, MinorOperation((0, 1), OpKind.CONTRACT))


def test_xy_sum_sizes(k33_open, k5_minus_e):
    s = xy_sum(k33_open, k33_open)
    assert (s.n, s.m) == (10, 18)
    t = xy_sum(k5_minus_e, k5_minus_e)
    assert (t.n, t.m) == (8, 18)


def test_xy_sum_gluings_can_differ():
    # path x-a-y with a pendant vertex at x: the gluings put the two pendant
    # vertices on the same terminal or on different ones
    g = TerminalGraph(SimpleGraph(4, [(0, 1), (0, 3), (1, 2)]), (0, 2))
    a, b = xy_sum(g, g), xy_sum(g, g, swap=True)
    assert not is_isomorphic(a.graph, b.graph)


def test_xy_sum_rejects_terminal_edge():
    with pytest.raises(GraphError):
        xy_sum(TerminalGraph(complete_graph(3), (0, 1)), TerminalGraph(path_graph(3), (0, 2)))


def test_plus_graph(k33_open, k5_minus_e):
    assert plus_graph(k33_open).m == 10
    with_edge = TerminalGraph(complete_graph(3), (0, 1))
    assert add_terminal_edge(with_edge) == with_edge
    assert plus_graph(k5_minus_e) == complete_graph(5)


def test_identify_terminals(k33_open, k5_minus_e):
    h = identify_terminals(k33_open)
    assert (h.n, h.m) == (5, 6)
    assert is_isomorphic(h, SimpleGraph(5, [(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)]))
    assert identify_terminals(TerminalGraph(path_graph(3), (0, 2))) == SimpleGraph(2, [(0, 1)])
    assert identify_terminals(k5_minus_e) == complete_graph(4)


def test_structure_queries():
    bowtie = one_sum(complete_graph(3), 0, complete_graph(3), 0)
    assert connectivity(bowtie) == 1
    assert len(blocks(bowtie)) == 2
    k4 = complete_graph(4)
    assert (connectivity(k4), len(blocks(k4)), cut_edges(k4)) == (3, 1, [])
    assert cut_edges(path_graph(3)) == [(0, 1), (1, 2)]


def test_xy_bridges_recover_parts(k33_open):
    s = xy_sum(k33_open, k33_open)
    parts = xy_bridges(s)
    assert len(parts) == 2
    assert all(is_isomorphic(p, k33_open) for p in parts)


def test_xy_bridges_include_terminal_edge():
    tg = TerminalGraph(cycle_graph(4), (0, 1))
    parts = xy_bridges(tg)
    assert sorted(p.m for p in parts) == [1, 3]


def test_two_core_strips_pendant_trees():
    g = SimpleGraph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (3, 5)])
    core, kept, removed = two_core(g)
    assert core == complete_graph(3) and kept == [0, 1, 2]
    assert len(removed) == 3


def test_bad_graphs_rejected():
    with pytest.raises(GraphError):
        SimpleGraph(2, [(0, 0)])
    with pytest.raises(GraphError):
        SimpleGraph(2, [(0, 2)])
    with pytest.raises(GraphError):
        TerminalGraph(complete_graph(3), (1, 1))
    with pytest.raises(GraphError):
        delete_edge(path_graph(3), (0, 2))


def test_every_operation_shrinks_the_graph():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(3, 8)
        tg = random_terminal_graph(rng, n, rng.randint(n - 1, n * (n - 1) // 2 - 1))
        for op in available_minor_ops(tg):
            h = apply_minor_op(tg, op)
            assert h.m < tg.m or h.n < tg.n
            assert isinstance(h, TerminalGraph)


def test_k33_terminal_classes(k33):
    # nonadjacent and adjacent choices give different terminal graphs
    assert not is_isomorphic(TerminalGraph(k33, (0, 1)), TerminalGraph(k33, (0, 3)))
    assert complete_bipartite(3, 3).m == 9
