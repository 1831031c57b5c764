"""Simple undirected graphs as fixed-order edge indicator sequences.

A graph on v labeled vertices maps to the C(v,2)-bit sequence that walks
the strict upper triangle of the adjacency matrix row by row:
(1,2),(1,3),...,(1,v),(2,3),...,(v-1,v).  The first pair lands on the
first (most significant) bit.  Vertex labels are 1-based externally.
"""

from dataclasses import dataclass, field

from . import bitio
from .bitio import Bits
from .codec import (
    BernoulliModel,
    build_container,
    decode_blocks,
    decode_sequence,
    encode_blocks,
    encode_sequence,
    open_container,
)
from .errors import BadMode, InvalidGraph, InvalidModel, LengthMismatch


@dataclass(frozen=True)
class Graph:
    v: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.v < 2:
            raise InvalidGraph(f"vertex count {self.v} < 2")
        object.__setattr__(self, "edges", frozenset(self.edges))
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.v):
                raise InvalidGraph(f"edge {e} invalid for v={self.v}")

    @classmethod
    def from_edges(cls, v, pairs):
        """Build from unordered pairs; rejects loops and duplicates."""
        edges = set()
        for i, j in pairs:
            if i == j:
                raise InvalidGraph(f"self-loop at vertex {i}")
            e = (i, j) if i < j else (j, i)
            if e in edges:
                raise InvalidGraph(f"duplicate edge {e}")
            edges.add(e)
        return cls(v, edges)

    def edge_count(self):
        return len(self.edges)


def edge_bit_count(v):
    return v * (v - 1) // 2


def _edge_index(v, i, j):
    # row-major over the strict upper triangle, zero-based
    return (i - 1) * (2 * v - i) // 2 + (j - i - 1)


def graph_to_bits(g):
    n = edge_bit_count(g.v)
    value = 0
    for i, j in g.edges:
        value |= 1 << (n - 1 - _edge_index(g.v, i, j))
    return Bits(n, value)


def bits_to_graph(bits, v):
    n = edge_bit_count(v)
    if bits.length != n:
        raise LengthMismatch(
            f"{bits.length} bits for v={v}, expected C({v},2)={n}")
    edges = set()
    for pos in bits.one_positions():
        idx = n - 1 - pos
        i = 1
        row_len = v - 1
        while idx >= row_len:
            idx -= row_len
            i += 1
            row_len -= 1
        edges.add((i, i + idx + 1))
    return Graph(v, edges)


def encode_graph(g, p, mode="direct", block_len=0):
    bits = graph_to_bits(g)
    if mode == "direct":
        payload = encode_sequence(bits, BernoulliModel(bits.length, p))
        header_mode = bitio.MODE_GRAPH_DIRECT
        block_len = 0
    elif mode == "block":
        payload = encode_blocks(bits, p, block_len)
        header_mode = bitio.MODE_GRAPH_BLOCK
    else:
        raise InvalidModel(f"unknown mode {mode!r}")
    return build_container(header_mode, g.v, p, block_len, payload)


def decode_graph(data):
    header, reader = open_container(data)
    if header.mode not in (bitio.MODE_GRAPH_DIRECT, bitio.MODE_GRAPH_BLOCK):
        raise BadMode(f"container mode {header.mode} is not a graph mode")
    v = header.n_or_v
    n = edge_bit_count(v)
    if header.mode == bitio.MODE_GRAPH_DIRECT:
        bits = decode_sequence(reader, BernoulliModel(n, header.p))
    else:
        bits = decode_blocks(reader, n, header.p, header.block_len)
    return bits_to_graph(bits, v)


# --- edge-list text format ---
#
# First line: "v <vertex-count>".  Every following non-empty line is one
# edge "i j" (whitespace-separated, any order within the pair).

def format_edgelist(g):
    lines = [f"v {g.v}"]
    lines.extend(f"{i} {j}" for i, j in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_edgelist(text):
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise InvalidGraph("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "v":
        raise InvalidGraph(
            f"expected first line 'v <vertex-count>', got {lines[0]!r}")
    try:
        v = int(head[1])
    except ValueError:
        raise InvalidGraph(f"bad vertex count {head[1]!r}") from None
    pairs = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidGraph(f"bad edge line {ln!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise InvalidGraph(f"bad edge line {ln!r}") from None
    return Graph.from_edges(v, pairs)
