"""Reference coders and exhaustive audits used to ground comparisons.

huffman_build gives the optimal prefix code for a distribution, with tie
breaking pinned so tables reproduce byte-for-byte: ties pop the lower
symbol id first, and a merged node orders after all existing nodes of
equal probability.  sfe_build is the midpoint-cumulative construction
whose mean stays within 2 bits of the entropy.  Both can be applied to
the full 2^n sequence alphabet at desk scale (n <= 16) to audit the main
two-part coder against textbook alternatives.
"""

import heapq
from dataclasses import dataclass
from math import ceil, log2

import numpy as np

from .analysis import binomial_pmf, rank_widths
from .bitio import BitReader, Bits
from .codec import BernoulliModel, decode_sequence, encode_sequence
from .errors import DegenerateDistribution, TooLarge

AUDIT_CODERS = ("two-part", "huffman-full", "sfe-full")
AUDIT_MAX_N = 16


@dataclass(frozen=True)
class CodeTable:
    symbols: tuple
    codewords: tuple
    probabilities: tuple

    def codeword_of(self, symbol):
        return self.codewords[self.symbols.index(symbol)]

    def lengths(self):
        return {s: cw.length for s, cw in zip(self.symbols, self.codewords)}

    def mean_length(self):
        return sum(p * cw.length
                   for p, cw in zip(self.probabilities, self.codewords))

    def kraft_sum(self):
        lmax = max(cw.length for cw in self.codewords)
        total = sum(1 << (lmax - cw.length) for cw in self.codewords)
        return total / (1 << lmax)

    def is_prefix_free(self):
        return _prefix_free(cw.to01() for cw in self.codewords)


def _prefix_free(words):
    ordered = sorted(words)
    return not any(b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def _nonzero(probabilities):
    items = [(s, p) for s, p in enumerate(probabilities) if p > 0.0]
    if len(items) < 2:
        raise DegenerateDistribution(
            f"{len(items)} nonzero symbols, need at least 2")
    return items


def huffman_build(probabilities):
    items = _nonzero(probabilities)
    # heap entries: (probability, tie order, node id); leaves take their
    # symbol position as order, merged nodes get fresh higher orders
    children = {}
    heap = []
    for node_id, (_, p) in enumerate(items):
        heap.append((p, node_id, node_id))
    heapq.heapify(heap)
    next_id = len(items)
    while len(heap) > 1:
        pa, _, a = heapq.heappop(heap)
        pb, _, b = heapq.heappop(heap)
        children[next_id] = (a, b)  # first popped takes branch 0
        heapq.heappush(heap, (pa + pb, next_id, next_id))
        next_id += 1
    root = heap[0][2]
    codes = {}
    stack = [(root, 0, 0)]
    while stack:
        node, length, value = stack.pop()
        if node in children:
            left, right = children[node]
            stack.append((left, length + 1, value << 1))
            stack.append((right, length + 1, (value << 1) | 1))
        else:
            codes[node] = Bits(length, value)
    return CodeTable(
        symbols=tuple(s for s, _ in items),
        codewords=tuple(codes[i] for i in range(len(items))),
        probabilities=tuple(p for _, p in items),
    )


def sfe_build(probabilities):
    """Midpoint-cumulative coder: ceil(log2 1/p)+1 bits of Fbar(s)."""
    items = _nonzero(probabilities)
    codewords = []
    cum = 0.0
    for _, p in items:
        fbar = cum + p / 2.0
        length = ceil(-log2(p)) + 1
        codewords.append(Bits(length, int(fbar * (1 << length))))
        cum += p
    return CodeTable(
        symbols=tuple(s for s, _ in items),
        codewords=tuple(codewords),
        probabilities=tuple(p for _, p in items),
    )


@dataclass(frozen=True)
class AuditReport:
    coder: str
    n: int
    p: float
    mean_length: float
    entropy: float
    kraft_sum: float
    prefix_free: bool
    max_length: int
    roundtrip_ok: bool

    CSV_HEADER = "coder,n,p,mean_length,entropy,kraft_sum,prefix_free,max_length,roundtrip_ok"

    def csv_row(self):
        return (f"{self.coder},{self.n},{self.p:.10g},"
                f"{self.mean_length:.10g},{self.entropy:.10g},"
                f"{self.kraft_sum:.12g},{int(self.prefix_free)},"
                f"{self.max_length},{int(self.roundtrip_ok)}")


def exhaustive_code_audit(n, p, coder="two-part"):
    """Enumerate all 2^n sequences and audit the chosen coder on them."""
    if not 1 <= n <= AUDIT_MAX_N:
        raise TooLarge(f"exhaustive audit limited to 1 <= n <= {AUDIT_MAX_N}")
    if coder not in AUDIT_CODERS:
        raise ValueError(f"unknown coder {coder!r}")
    q = 1.0 - p
    seq_probs = [p ** x.bit_count() * q ** (n - x.bit_count())
                 for x in range(1 << n)]
    entropy = float(-np.log2(seq_probs) @ np.asarray(seq_probs))

    if coder == "two-part":
        model = BernoulliModel(n, p)
        words = []
        roundtrip_ok = True
        for value in range(1 << n):
            x = Bits(n, value)
            cw = encode_sequence(x, model)
            words.append(cw)
            data, nbits = cw.to_bytes_msb()
            if decode_sequence(BitReader(data, nbits), model) != x:
                roundtrip_ok = False
        mean = sum(pr * cw.length for pr, cw in zip(seq_probs, words))
        lmax = max(cw.length for cw in words)
        kraft = sum(1 << (lmax - cw.length) for cw in words) / (1 << lmax)
        prefix = _prefix_free(cw.to01() for cw in words)
        max_len = lmax
    else:
        build = huffman_build if coder == "huffman-full" else sfe_build
        table = build(seq_probs)
        mean = table.mean_length()
        kraft = table.kraft_sum()
        prefix = table.is_prefix_free()
        max_len = max(cw.length for cw in table.codewords)
        roundtrip_ok = prefix  # prefix-free tables decode by construction

    return AuditReport(coder=coder, n=n, p=p, mean_length=float(mean),
                       entropy=entropy, kraft_sum=float(kraft),
                       prefix_free=prefix, max_length=max_len,
                       roundtrip_ok=roundtrip_ok)


def huffman_count_variant_mean(n, p):
    """Mean of [Huffman over the weight] + [rank bits]: a floor for the
    main code's weight-coding cost."""
    pmf = binomial_pmf(n, p)
    table = huffman_build(pmf.tolist())  # every weight has positive mass
    huff_lengths = np.array([cw.length for cw in table.codewords],
                            dtype=np.float64)
    return float(pmf @ (huff_lengths + rank_widths(n).astype(np.float64)))
