"""Binomial coefficients and the lexicographic rank/unrank bijection.

A length-n bit sequence with Hamming weight k is identified with its value
as an n-bit binary number (first sequence element = most significant bit).
Its rank is the number of weight-k n-bit values that are numerically
smaller.  With l_1 < l_2 < ... < l_k the positions of the 1-bits counted
from the right (LSB = position 0),

    rank = sum over i of C(l_i, i)

where C(l, i) = 0 whenever i > l.  The inverse is the greedy combinadic
decomposition: pick the largest l with C(l, k) <= r, subtract, recurse
with k - 1.

Two evaluation strategies are used for both directions.  Small inputs run
a plain incremental scan that derives each binomial from its neighbour
with one multiply and one exact division.  Large inputs (the rank value
can run to hundreds of kilobits) switch to anchored evaluation: gmpy2's
binomial for a handful of anchor terms, balanced product trees for the
ratios in between, and float log-gamma estimates to locate combinadic
digits before verifying them exactly.  Both strategies are exact; they
are cross-checked against each other in the test suite.
"""

import math
from math import prod

import gmpy2
from gmpy2 import mpz

from .bitio import Bits
from .errors import RankOutOfRange, WeightMismatch

_LN2 = math.log(2.0)

# Tuning knobs for the large-input paths (exactness never depends on them).
_RANK_GROUP_TARGET = 4096   # combinadic digits per anchored group
_RANK_LEAF_RATIOS = 16      # ratios folded sequentially per tree leaf
_LARGE_RANK_WORK = 3e8      # est. k * log2 C(n,k) above which rank groups
_LARGE_UNRANK_N = 4096      # sequence length above which unrank jumps


def binomial(n, k):
    """C(n, k) as an exact integer; 0 when k < 0 or k > n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or k > n:
        return 0
    return int(gmpy2.bincoef(n, k))


def rank_bit_width(n, k):
    """Exact ceil(log2 C(n, k)); 0 when C(n, k) = 1."""
    if not 0 <= k <= n:
        raise ValueError(f"weight {k} out of range for length {n}")
    c = gmpy2.bincoef(n, k)
    return int(c - 1).bit_length()


def rank(x, k):
    """Lexicographic index of `x` among all n-bit values of weight k."""
    if k != x.popcount():
        raise WeightMismatch(f"declared weight {k}, popcount {x.popcount()}")
    n = x.length
    if k == 0:
        return 0
    if 2 * k > n and n > 64:
        # fewer terms on the zero side: rank_k(x) = C(n,k)-1-rank_{n-k}(~x)
        comp = Bits(n, ~x.value & ((1 << n) - 1))
        return int(gmpy2.bincoef(n, k)) - 1 - rank(comp, n - k)
    return int(_rank_positions(x.one_positions(), n))


def unrank(r, n, k):
    """The unique weight-k n-bit sequence whose rank is `r`."""
    if k < 0 or k > n or r < 0 or r >= gmpy2.bincoef(n, k):
        raise RankOutOfRange(
            f"rank {r} outside [0, C({n},{k}))")
    if k == 0:
        return Bits(n, 0)
    if 2 * k > n and n > 64:
        mask = (1 << n) - 1
        comp = unrank(int(gmpy2.bincoef(n, k)) - 1 - r, n, n - k)
        return Bits(n, ~comp.value & mask)
    positions = _unrank_positions(mpz(r), n, k)
    return Bits(n, _positions_to_value(positions, n))


# --- rank internals ---

def _rank_positions(positions, n):
    """Sum of C(l_i, i) over the 1-based enumeration of `positions`."""
    # a maximal prefix with l_i = i-1 contributes only zero terms
    start = 0
    while start < len(positions) and positions[start] == start:
        start += 1
    if start == len(positions):
        return mpz(0)
    k_eff = len(positions) - start
    if k_eff >= 2048 and _estimated_work(n, len(positions)) > _LARGE_RANK_WORK:
        return _rank_grouped(positions, start)
    return _rank_chain(positions, start)


def _estimated_work(n, k):
    frac = min(max(k / n, 1e-12), 1 - 1e-12)
    h = -(frac * math.log2(frac) + (1 - frac) * math.log2(1 - frac))
    return k * n * h


def _rank_chain(positions, start):
    # C(l_i, i) from C(l_{i-1}, i-1) with the gap factors batched into one
    # multiply and one exact division
    i = start + 1
    prev = positions[start]
    b = gmpy2.bincoef(prev, i)
    acc = mpz(b)
    for idx in range(start + 1, len(positions)):
        i += 1
        l = positions[idx]
        num = prod(range(prev + 1, l + 1))
        den = i * prod(range(prev - i + 2, l - i + 1))
        b = gmpy2.divexact(b * num, den)
        acc += b
        prev = l
    return acc


def _ratio_leaf(positions, lo, hi, i_of):
    """Fold ratios for digit indices [lo, hi) into one (N, D, T) triple."""
    prev = positions[lo - 1]
    l = positions[lo]
    i = i_of(lo)
    n_acc = mpz(prod(range(prev + 1, l + 1)))
    d_acc = mpz(i * prod(range(prev - i + 2, l - i + 1)))
    t_acc = n_acc
    prev = l
    for idx in range(lo + 1, hi):
        i += 1
        l = positions[idx]
        nn = mpz(prod(range(prev + 1, l + 1)))
        dd = mpz(i * prod(range(prev - i + 2, l - i + 1)))
        t_acc = t_acc * dd + n_acc * nn
        n_acc = n_acc * nn
        d_acc = d_acc * dd
        prev = l
    return n_acc, d_acc, t_acc


def _merge_triples(nodes):
    while len(nodes) > 1:
        merged = []
        for j in range(0, len(nodes) - 1, 2):
            nl, dl, tl = nodes[j]
            nr, dr, tr = nodes[j + 1]
            merged.append((nl * nr, dl * dr, tl * dr + nl * tr))
        if len(nodes) & 1:
            merged.append(nodes[-1])
        nodes = merged
    return nodes[0]


def _rank_grouped(positions, start):
    k = len(positions)
    total = mpz(0)
    groups = max(1, min(24, (k - start) // _RANK_GROUP_TARGET))
    bounds = [start + (k - start) * g // groups for g in range(groups + 1)]
    i_of = lambda idx: idx + 1  # digit index of positions[idx]
    for g in range(groups):
        lo, hi = bounds[g], bounds[g + 1]
        anchor = gmpy2.bincoef(positions[lo], i_of(lo))
        if hi - lo == 1:
            total += anchor
            continue
        leaves = [
            _ratio_leaf(positions, j, min(j + _RANK_LEAF_RATIOS, hi), i_of)
            for j in range(lo + 1, hi, _RANK_LEAF_RATIOS)
        ]
        n_acc, d_acc, t_acc = _merge_triples(leaves)
        total += gmpy2.divexact(anchor * (d_acc + t_acc), d_acc)
    return total


# --- unrank internals ---

def _positions_to_value(positions, n):
    if n > 4096 and len(positions) > 64:
        import numpy as np

        nbytes = (n + 7) // 8
        arr = np.zeros(nbytes * 8, dtype=np.uint8)
        idx = nbytes * 8 - 1 - np.asarray(positions, dtype=np.int64)
        arr[idx] = 1
        return int.from_bytes(np.packbits(arr).tobytes(), "big")
    v = 0
    for p in positions:
        v |= 1 << p
    return v


def _unrank_positions(rem, n, k):
    if n <= _LARGE_UNRANK_N:
        return _unrank_descent(rem, n, k)
    return _unrank_jump(rem, n, k)


def _unrank_descent(rem, n, k):
    """Greedy scan over every position, one multiply/divide per step."""
    positions = []
    l = n - 1
    b = gmpy2.bincoef(l, k)
    for i in range(k, 0, -1):
        while b > rem:
            b = gmpy2.divexact(b * (l - i), l)
            l -= 1
        positions.append(l)
        rem -= b
        if i > 1:
            b = gmpy2.divexact(b * i, l)
            l -= 1
    if rem:
        raise RankOutOfRange("rank does not decompose; corrupt input")
    positions.reverse()
    return positions


def _lg_mpz(x):
    """log2 of a positive mpz to ~1e-12, from the top 53 bits."""
    bl = x.bit_length()
    if bl <= 53:
        return math.log2(int(x))
    return math.log2(int(x >> (bl - 53))) + (bl - 53)


def _lg_binom(l, i):
    if i > l:
        return -math.inf
    if i == 0 or i == l:
        return 0.0
    return (math.lgamma(l + 1) - math.lgamma(i + 1)
            - math.lgamma(l - i + 1)) / _LN2


def _locate_digit(lg_rem, i, hi):
    """Largest l <= hi with log2 C(l, i) <= lg_rem, by float estimate.

    Only a starting point: the caller re-verifies against exact integers,
    so a float mis-location costs extra fix-up steps, never correctness.
    """
    if _lg_binom(hi, i) <= lg_rem:
        return hi
    lo = i - 1  # C(i-1, i) = 0, always <= rem
    l = hi
    for _ in range(60):
        if hi - lo <= 1:
            break
        lgc = _lg_binom(l, i)
        if lgc <= lg_rem:
            lo = l
        else:
            hi = l
            slope = math.log2(l / (l - i))
            step = int((lgc - lg_rem) / slope) + 1 if slope > 0 else 1
            nxt = l - step
            if lo < nxt < hi:
                l = nxt
                continue
        l = (lo + hi) // 2
    return lo


def _retarget(b, l_from, i_from, l_to):
    """C(l_to, i_from - 1) from b = C(l_from, i_from), l_to < l_from."""
    i_to = i_from - 1
    num = i_from * prod(range(l_to - i_to + 1, l_from - i_to))
    den = prod(range(l_to + 1, l_from + 1))
    return gmpy2.divexact(b * num, den)


def _unrank_jump(rem, n, k):
    """Greedy decomposition that visits only the k digit positions."""
    positions = []
    b = None
    l_prev = None
    for i in range(k, 0, -1):
        if not rem:
            positions.extend(range(i - 1, -1, -1))
            break
        bound = l_prev if l_prev is not None else n
        l = _locate_digit(_lg_mpz(rem), i, bound - 1)
        if b is None:
            b = gmpy2.bincoef(l, i)
        else:
            b = _retarget(b, l_prev, i + 1, l)
        descended = False
        while b > rem:
            b = gmpy2.divexact(b * (l - i), l)
            l -= 1
            descended = True
        while not descended and l + 1 < bound:
            b2 = gmpy2.divexact(b * (l + 1), l + 1 - i)
            if b2 <= rem:
                b = b2
                l += 1
            else:
                break
        positions.append(l)
        rem -= b
        l_prev = l
    else:
        if rem:
            raise RankOutOfRange("rank does not decompose; corrupt input")
    positions.reverse()
    return positions
