import random

import networkx as nx
import pytest

from genusforge.graph6 import (MalformedDataError, MalformedHeaderError, TruncatedDataError, parse_graph6,
                               parse_sparse6, parse_tg6, read_graph6_file, read_tg6_file, write_graph6,
                               write_sparse6, write_tg6)
from genusforge.graphs import SimpleGraph, TerminalGraph, complete_graph
from genusforge.pools import random_connected_graph


def test_k5_bytes():
    assert write_graph6(complete_graph(5)) == b"D~{"
    assert parse_graph6(b"D~{") == complete_graph(5)


def test_empty_graph_is_question_mark():
    assert write_graph6(SimpleGraph(0)) == b"?"
    assert parse_graph6("?") == SimpleGraph(0)


def test_header_is_optional():
    assert write_graph6(complete_graph(3), header=True) == b">>graph6<<Bw"
    assert parse_graph6(b">>graph6<<Bw") == complete_graph(3)


def _random_graphs(count, max_n, seed=0):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(0, max_n)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        yield SimpleGraph(n, rng.sample(pairs, rng.randint(0, len(pairs))))


@pytest.mark.parametrize("max_n", [8, 70])
def test_graph6_matches_networkx(max_n):
    for g in _random_graphs(60, max_n):
        ours = write_graph6(g)
        theirs = nx.to_graph6_bytes(g.to_networkx(), header=False).strip()
        assert ours == theirs
        assert parse_graph6(theirs) == g


def test_sparse6_interoperates_with_networkx():
    for g in _random_graphs(60, 40, seed=1):
        if g.n == 0:
            continue
        ours = write_sparse6(g)
        assert SimpleGraph.from_networkx(nx.from_sparse6_bytes(ours)) == g
        theirs = nx.to_sparse6_bytes(g.to_networkx(), header=False).strip()
        assert parse_sparse6(theirs) == g


@pytest.mark.parametrize("bad, err", [
    ("D~", TruncatedDataError),
    ("D~{?", MalformedDataError),
    ("D~|", MalformedDataError),    # padding bit set
    ("D~{ ", None),                 # trailing whitespace is stripped
    ("", MalformedHeaderError),
    (":Fa@x^", MalformedHeaderError),
    ("D~\x7f", MalformedDataError),
])
def test_malformed_graph6(bad, err):
    if err is None:
        assert parse_graph6(bad) == complete_graph(5)
    else:
        with pytest.raises(err):
            parse_graph6(bad)


def test_tg6_roundtrip():
    tg = TerminalGraph(complete_graph(4), (3, 1))
    line = write_tg6(tg)
    assert line == "C~ 1 3"
    assert parse_tg6(line) == tg


@pytest.mark.parametrize("bad", ["C~ 1", "C~ 1 x", "C~ 1 1", "C~ 0 9"])
def test_malformed_tg6(bad):
    with pytest.raises(ValueError):
        parse_tg6(bad)


def test_file_readers_skip_comments(tmp_path):
    rng = random.Random(2)
    graphs = [random_connected_graph(rng, 6, 8) for _ in range(5)]
    p = tmp_path / "g.g6"
    p.write_text("# header\n" + "".join(write_graph6(g).decode() + "\n\n" for g in graphs))
    assert read_graph6_file(p) == graphs
    q = tmp_path / "g.tg6"
    q.write_text("C~ 0 1\n# c\nBw 0 2\n")
    assert [t.terminals for t in read_tg6_file(q)] == [(0, 1), (0, 2)]
