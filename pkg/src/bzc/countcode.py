"""Prefix code for the Hamming weight of a fixed-length Bernoulli sequence.

The weight k is coded as its signed distance from floor(n*p): one flag
bit F (0 when k <= n*p), then t = floor(log2(d+1)) in a fixed number of
bits, then u = d+1-2^t in t bits.  Small distances get short codewords.

The width reserved for t is derived from (n, p) so that every reachable
t fits: t_width = max(1, ceil(log2(t_max+1))) with t_max taken at the
largest possible distance max(floor(n*p), n - floor(n*p)).  Encoder and
decoder derive it from the same (n, p) pair, so no side information is
needed beyond the header.
"""

import math
from dataclasses import dataclass

from .bitio import Bits
from .errors import InvalidModel, KOutOfRange, NonCanonical, WeightOutOfRange


@dataclass(frozen=True)
class CountCodeParams:
    n: int
    p: float
    floor_np: int
    d_max: int
    t_max: int
    t_width: int


@dataclass(frozen=True)
class CountCode:
    f: int
    t: int
    u: int
    d: int
    t_width: int

    @property
    def length(self):
        return 1 + self.t_width + self.t


def derive_params(n, p):
    if n < 1:
        raise InvalidModel(f"sequence length {n} < 1")
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise InvalidModel(f"p = {p!r} outside (0, 1)")
    floor_np = math.floor(n * p)  # binary64 product on both endpoints
    d_max = max(floor_np, n - floor_np)
    t_max = (d_max + 1).bit_length() - 1
    t_width = max(1, t_max.bit_length())
    return CountCodeParams(n=n, p=p, floor_np=floor_np, d_max=d_max,
                           t_max=t_max, t_width=t_width)


def count_parts(k, params):
    """The (F, t, u, d) decomposition of the codeword for weight k."""
    if not 0 <= k <= params.n:
        raise WeightOutOfRange(f"weight {k} for length {params.n}")
    f = 0 if k <= params.n * params.p else 1
    d = abs(k - params.floor_np)
    t = (d + 1).bit_length() - 1
    u = d + 1 - (1 << t)
    return CountCode(f=f, t=t, u=u, d=d, t_width=params.t_width)


def encode_count(k, params):
    c = count_parts(k, params)
    value = (c.f << (params.t_width + c.t)) | (c.t << c.t) | c.u
    return Bits(1 + params.t_width + c.t, value)


def decode_count(reader, params):
    """Read one weight codeword; returns (k, bits consumed)."""
    head = reader.read(1 + params.t_width)
    f = head.value >> params.t_width
    t = head.value & ((1 << params.t_width) - 1)
    u = reader.read(t).value
    d = (1 << t) + u - 1
    if f == 1 and d == 0:
        raise NonCanonical("F=1 with zero distance")
    k = params.floor_np + d if f else params.floor_np - d
    if not 0 <= k <= params.n:
        raise KOutOfRange(f"decoded weight {k} for length {params.n}")
    return k, 1 + params.t_width + t


def count_code_length(k, params):
    if not 0 <= k <= params.n:
        raise WeightOutOfRange(f"weight {k} for length {params.n}")
    d = abs(k - params.floor_np)
    return 1 + params.t_width + (d + 1).bit_length() - 1
