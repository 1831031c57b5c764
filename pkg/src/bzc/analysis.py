"""Exact expected code lengths, entropy quantities, and bound checks.

Everything here is binary64.  The binomial pmf is built from the
log-space recurrence log pmf(k+1) - log pmf(k) = log((n-k) p / ((k+1) q)),
which stays stable for n up to 1e5.  Rank widths ceil(log2 C(n,k)) come
from exact big-integer bit lengths, never from floating-point logs.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import numpy as np

from .countcode import derive_params
from .errors import BadProbability, InvalidModel

#: Alternative t-field widths for the expected-length sum.  "capacity" is
#: what the codec actually emits; "loglog" substitutes ceil(log2 log2 n),
#: which under-provisions for some (n, p) and exists only so the cost of
#: the capacity-safe width can be quantified.
WIDTH_MODES = ("capacity", "loglog")


def bernoulli_entropy(p):
    """Entropy h(p) of one Bernoulli(p) trial, in bits."""
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise BadProbability(f"p = {p!r} outside (0, 1)")
    q = 1.0 - p
    return -(p * math.log2(p) + q * math.log2(q))


def sequence_entropy(n, p):
    """Entropy n*h(p) of n independent trials, in bits."""
    if n < 1:
        raise InvalidModel(f"sequence length {n} < 1")
    return n * bernoulli_entropy(p)


def binomial_pmf(n, p):
    """pmf of B(n, p) over k = 0..n as a float64 array."""
    if n < 1:
        raise InvalidModel(f"n = {n} < 1")
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise BadProbability(f"p = {p!r} outside (0, 1)")
    q = 1.0 - p
    k = np.arange(n, dtype=np.float64)
    steps = np.log((n - k) / (k + 1.0)) + math.log(p / q)
    logpmf = np.concatenate(([n * math.log(q)],
                             n * math.log(q) + np.cumsum(steps)))
    return np.exp(logpmf)


def count_lengths(n, p, width_mode="capacity"):
    """Weight-codeword length L_k for k = 0..n as an int64 array."""
    params = derive_params(n, p)
    t_width = _t_width(params, width_mode)
    d = np.abs(np.arange(n + 1, dtype=np.int64) - params.floor_np)
    # floor(log2(d+1)) through frexp: the returned exponent is the bit length
    _, exponent = np.frexp((d + 1).astype(np.float64))
    return 1 + t_width + (exponent.astype(np.int64) - 1)


def _t_width(params, width_mode):
    if width_mode == "capacity":
        return params.t_width
    if width_mode == "loglog":
        if params.n < 2:
            raise InvalidModel("loglog width undefined for n < 2")
        return math.ceil(math.log2(math.log2(params.n)))
    raise InvalidModel(f"unknown width_mode {width_mode!r}")


@lru_cache(maxsize=64)
def rank_widths(n):
    """ceil(log2 C(n,k)) for k = 0..n, from exact bit lengths."""
    w = np.zeros(n + 1, dtype=np.int64)
    c = gmpy2.mpz(1)
    for k in range(n // 2 + 1):
        width = int(c - 1).bit_length()
        w[k] = width
        w[n - k] = width
        c = c * (n - k) // (k + 1)
    return w


def exact_mean_length(n, p, width_mode="capacity"):
    """The exact expectation sum(pmf(k) * (L_k + ceil(log2 C(n,k))))."""
    pmf = binomial_pmf(n, p)
    lengths = count_lengths(n, p, width_mode) + rank_widths(n)
    return float(pmf @ lengths.astype(np.float64))


def block_mean_length(total_len, p, block_len, width_mode="capacity"):
    """Expected block-mode length: sum of per-block exact means."""
    if total_len < 1 or block_len < 1:
        raise InvalidModel("lengths must be >= 1")
    full, tail = divmod(total_len, block_len)
    mean = full * exact_mean_length(block_len, p, width_mode)
    if tail:
        mean += exact_mean_length(tail, p, width_mode)
    return mean


def mean_length_upper_bound(n, p):
    """n h(p) + log2 log2 n + log2 sqrt(1/(2 pi e)) + 3."""
    if n < 2:
        raise InvalidModel(f"bound needs n >= 2, got {n}")
    return (sequence_entropy(n, p) + math.log2(math.log2(n))
            + 0.5 * math.log2(1.0 / (2.0 * math.pi * math.e)) + 3.0)


def binomial_entropy_approx(n, p):
    """Gaussian-style approximation 0.5 log2(2 pi e n p q)."""
    npq = n * p * (1.0 - p)
    if npq <= 0.0:
        raise InvalidModel(f"npq = {npq} must be positive")
    return 0.5 * math.log2(2.0 * math.pi * math.e * npq)


def binomial_entropy_exact(n, p):
    """H(B(n, p)) summed directly from the pmf."""
    pmf = binomial_pmf(n, p)
    pmf = pmf[pmf > 0.0]
    return float(-(pmf @ np.log2(pmf)))


@dataclass(frozen=True)
class MadCheck:
    exact_mad: float
    bound: float
    holds: bool


def verify_mad_bound(n, p):
    """Exact E|k - np| against the sqrt(npq) bound."""
    pmf = binomial_pmf(n, p)
    k = np.arange(n + 1, dtype=np.float64)
    exact = float(pmf @ np.abs(k - n * p))
    bound = math.sqrt(n * p * (1.0 - p))
    return MadCheck(exact_mad=exact, bound=bound, holds=exact <= bound)


@dataclass(frozen=True)
class LengthReport:
    n: int
    p: float
    entropy_bits: float
    exact_mean_len: float
    upper_bound: float
    binomial_entropy_approx: float
    mad_bound: float


def length_report(n, p):
    return LengthReport(
        n=n,
        p=p,
        entropy_bits=sequence_entropy(n, p),
        exact_mean_len=exact_mean_length(n, p),
        upper_bound=mean_length_upper_bound(n, p),
        binomial_entropy_approx=binomial_entropy_approx(n, p),
        mad_bound=math.sqrt(n * p * (1.0 - p)),
    )
