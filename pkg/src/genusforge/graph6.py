"""graph6, sparse6 and the terminal-annotated tg6 line format.

graph6/sparse6 follow the format description shipped with nauty, bit for bit.
A tg6 line is ``<graph6> <x> <y>``: a graph6 string followed by the two
terminal labels.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

from .graphs import SimpleGraph, TerminalGraph

GRAPH6_HEADER = b">>graph6<<"
SPARSE6_HEADER = b">>sparse6<<"

# Largest vertex count we agree to materialize. The format itself allows 2**36 - 1.
MAX_VERTICES = 1 << 16


class Graph6Error(ValueError):
    """Base class for graph6/sparse6/tg6 decoding failures."""


class MalformedHeaderError(Graph6Error):
    """The size prefix is missing, uses bad characters or is not minimal."""


class TruncatedDataError(Graph6Error):
    """The data section ends before all encoded bits were read."""


class VertexCountOverflowError(Graph6Error):
    """The encoded vertex count exceeds what we are willing to build."""


class MalformedDataError(Graph6Error):
    """Bad characters, trailing bytes or nonzero padding in the data section."""


def _strip(data: bytes | str, header: bytes) -> bytes:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(header):
        data = data[len(header):]
    return data


def _encode_size(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise VertexCountOverflowError(f"{n} vertices cannot be encoded")


def _decode_size(data: bytes) -> tuple[int, int]:
    """Return (n, number of bytes consumed)."""
    if not data:
        raise MalformedHeaderError("empty input")
    width = 1 if data[0] != 126 else 8 if data[1:2] == b"~" else 4
    for c in data[:width]:
        if not 63 <= c <= 126:
            raise MalformedHeaderError(f"invalid size byte {c!r}")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise MalformedHeaderError("truncated 36-bit size field")
        n = 0
        for c in data[2:8]:
            n = (n << 6) | (c - 63)
        if n <= 258047:
            raise MalformedHeaderError("non-minimal 36-bit size field")
        used = 8
    else:
        if len(data) < 4:
            raise MalformedHeaderError("truncated 18-bit size field")
        n = 0
        for c in data[1:4]:
            n = (n << 6) | (c - 63)
        if n <= 62:
            raise MalformedHeaderError("non-minimal 18-bit size field")
        used = 4
    if n > MAX_VERTICES:
        raise VertexCountOverflowError(f"{n} vertices exceeds limit {MAX_VERTICES}")
    return n, used


def _bits_of(data: bytes) -> Iterator[int]:
    for c in data:
        if not 63 <= c <= 126:
            raise MalformedDataError(f"invalid data byte {c!r}")
        v = c - 63
        for s in range(5, -1, -1):
            yield (v >> s) & 1


def _pack_bits(bits: list[int]) -> bytes:
    bits = bits + [0] * (-len(bits) % 6)
    out = bytearray()
    for i in range(0, len(bits), 6):
        v = 0
        for b in bits[i:i + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return bytes(out)


def write_graph6(g: SimpleGraph, header: bool = False) -> bytes:
    n = g.n
    adj = g.adjacency_sets
    bits = [1 if i in adj[j] else 0 for j in range(1, n) for i in range(j)]
    body = _encode_size(n) + _pack_bits(bits)
    return GRAPH6_HEADER + body if header else body


def parse_graph6(data: bytes | str) -> SimpleGraph:
    data = _strip(data, GRAPH6_HEADER)
    if data.startswith(b":") or data.startswith(b";"):
        raise MalformedHeaderError("sparse6/incremental input passed to graph6 parser")
    n, used = _decode_size(data)
    body = data[used:]
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) < need:
        raise TruncatedDataError(f"expected {need} data bytes, got {len(body)}")
    if len(body) > need:
        raise MalformedDataError(f"{len(body) - need} trailing bytes")
    bits = list(_bits_of(body))
    if any(bits[nbits:]):
        raise MalformedDataError("nonzero padding bits")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return SimpleGraph(n, edges)


def _sparse6_k(n: int) -> int:
    k = 1
    while (1 << k) < n:
        k += 1
    return k


def write_sparse6(g: SimpleGraph, header: bool = False) -> bytes:
    n = g.n
    k = _sparse6_k(n)

    def enc(x: int) -> list[int]:
        return [(x >> (k - 1 - i)) & 1 for i in range(k)]

    bits: list[int] = []
    cur = 0
    for v, u in sorted((b, a) for a, b in g.edges):
        if v == cur:
            bits.append(0)
            bits.extend(enc(u))
        elif v == cur + 1:
            cur += 1
            bits.append(1)
            bits.extend(enc(u))
        else:
            cur = v
            bits.append(1)
            bits.extend(enc(v))
            bits.append(0)
            bits.extend(enc(u))
    if k < 6 and n == (1 << k) and (-len(bits)) % 6 >= k and cur < n - 1:
        # padding with ones would otherwise read back as an edge to n-1
        bits.append(0)
    bits.extend([1] * (-len(bits) % 6))
    body = b":" + _encode_size(n) + _pack_bits(bits)
    return SPARSE6_HEADER + body if header else body


def parse_sparse6(data: bytes | str) -> SimpleGraph:
    data = _strip(data, SPARSE6_HEADER)
    if not data.startswith(b":"):
        raise MalformedHeaderError("sparse6 data must start with ':'")
    n, used = _decode_size(data[1:])
    bits = list(_bits_of(data[1 + used:]))
    k = _sparse6_k(n)
    edges = set()
    v = 0
    i = 0
    while i + 1 + k <= len(bits):
        b = bits[i]
        x = 0
        for t in bits[i + 1:i + 1 + k]:
            x = (x << 1) | t
        i += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            # only legal as the tail padding
            break
        if x > v:
            v = x
        else:
            if x == v:
                raise MalformedDataError(f"loop at vertex {v} is not a simple graph")
            edges.add((x, v))
    return SimpleGraph(n, edges)


def parse_tg6(line: bytes | str) -> TerminalGraph:
    if isinstance(line, bytes):
        line = line.decode("ascii")
    parts = line.split()
    if len(parts) != 3:
        raise MalformedHeaderError(f"tg6 line needs '<graph6> <x> <y>', got {line!r}")
    g = parse_graph6(parts[0])
    try:
        x, y = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise MalformedDataError(f"bad terminal labels in {line!r}") from exc
    return TerminalGraph(g, (x, y))


def write_tg6(tg: TerminalGraph) -> str:
    x, y = tg.terminals
    return f"{write_graph6(tg.graph).decode('ascii')} {x} {y}"


def read_graph6_file(path: str | Path) -> list[SimpleGraph]:
    out = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        out.append(parse_sparse6(raw) if raw.startswith(":") else parse_graph6(raw))
    return out


def read_tg6_file(path: str | Path) -> list[TerminalGraph]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [parse_tg6(s) for s in lines if s.strip() and not s.lstrip().startswith("#")]


def write_lines(path: str | Path, lines: Iterable[str]) -> None:
    text = "".join(f"{s}\n" for s in lines)
    Path(path).write_text(text, encoding="utf-8", newline="\n")
