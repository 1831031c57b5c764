"""Seeded Monte Carlo experiment harness with reproducible CSV output.

Random bits come from SplitMix64 used as a counter-based generator:

    output_j = mix64((seed + (j+1) * 0x9E3779B97F4A7C15) mod 2^64)

with the standard mix64 finalizer (xor-shift 30/27/31, multipliers
0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).  Bit j of an instance is 1
iff (output_j >> 11) * 2^-53 < p.  Sample s of an experiment draws from
sub-seed (seed XOR s).  The construction has no sequential state, so any
sample or block can be generated independently and in parallel while
staying bit-identical to a serial run.  The generator is frozen: tests
pin its outputs.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import (
    block_mean_length,
    count_lengths,
    exact_mean_length,
    rank_widths,
    sequence_entropy,
)
from .bitio import Bits
from .errors import InvalidModel

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
DEFAULT_SEED = 20260809
DEFAULT_SAMPLES = 10_000


def mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def splitmix_stream(seed, count):
    """First `count` outputs of the stream for `seed`, as Python ints."""
    return [mix64(seed + (j + 1) * GAMMA) for j in range(count)]


def sub_seed(seed, index):
    return (seed ^ index) & MASK64


def _mix64_np(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _uniform_matrix(seeds, n):
    """Uniforms in [0,1) for each (seed, counter) pair; shape (len(seeds), n)."""
    counters = (np.arange(1, n + 1, dtype=np.uint64)
                * np.uint64(GAMMA))[None, :]
    states = np.asarray(seeds, dtype=np.uint64)[:, None] + counters
    return (_mix64_np(states) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def draw_instance(n, p, seed):
    """One n-bit instance with i.i.d. Bernoulli(p) bits."""
    if n < 1:
        raise InvalidModel(f"instance length {n} < 1")
    bools = _uniform_matrix([seed], n)[0] < p
    nbytes = (n + 7) // 8
    padded = np.zeros(nbytes * 8, dtype=np.uint8)
    padded[:n] = bools
    value = int.from_bytes(np.packbits(padded).tobytes(), "big")
    return Bits(n, value >> (nbytes * 8 - n))


# --- experiment rows ---

CSV_HEADER = ("model,n,p,block_len,entropy_bits,exact_mean,"
              "mc_mean,mc_std,samples,seed,width_mode")


@dataclass(frozen=True)
class ExperimentRow:
    model: str
    n: int
    p: float
    block_len: int  # 0 means direct
    entropy_bits: float
    exact_mean: float
    mc_mean: float
    mc_std: float
    samples: int
    seed: int
    width_mode: str

    def mc_consistent(self, sigmas=5.0):
        margin = sigmas * self.mc_std / math.sqrt(self.samples)
        return abs(self.mc_mean - self.exact_mean) <= margin

    def csv_row(self):
        return (f"{self.model},{self.n},{self.p:.10g},{self.block_len},"
                f"{self.entropy_bits:.10g},{self.exact_mean:.10g},"
                f"{self.mc_mean:.10g},{self.mc_std:.10g},"
                f"{self.samples},{self.seed},{self.width_mode}")


@dataclass(frozen=True)
class ModelSpec:
    model: str
    n: int
    p: float
    block_len: int = 0  # 0 means direct


def _g(v, p, block_len=0):
    return ModelSpec(f"g({v},{p:g})", v * (v - 1) // 2, p, block_len)


def _b(n, p, block_len=0):
    return ModelSpec(f"bernoulli({n},{p:g})", n, p, block_len)


TABLE1_MODELS = (
    _b(50, 0.1), _b(50, 0.01), _b(20, 0.2),
    _g(5, 0.1), _g(8, 0.2), _g(10, 0.1),
)

TABLE2_MODELS = (
    _b(200, 0.2, 5), _b(1000, 0.01, 50),
    _g(20, 0.05, 10), _g(100, 0.01, 25),
)

SWEEP_P_GRID = tuple(round(0.01 * i, 2) for i in range(1, 51))
SWEEP_N_GRID = (10, 50, 100, 500, 1000, 5000)

EXPERIMENT_KINDS = ("table1", "table2", "sweep-p", "sweep-n")


def models_for_kind(kind):
    if kind == "table1":
        return list(TABLE1_MODELS)
    if kind == "table2":
        return list(TABLE2_MODELS)
    if kind == "sweep-p":
        return [_b(50, p) for p in SWEEP_P_GRID]
    if kind == "sweep-n":
        return [_b(n, 0.1) for n in SWEEP_N_GRID]
    raise InvalidModel(f"unknown experiment kind {kind!r}")


def _length_table(m, p, width_mode):
    return count_lengths(m, p, width_mode) + rank_widths(m)


def sample_lengths(spec, samples, seed, width_mode="capacity"):
    """Codeword length of `samples` seeded instances, via the length law
    len = L_k + ceil(log2 C(m,k)) applied per block weight."""
    n = spec.n
    block = spec.block_len or n
    full, tail = divmod(n, block)
    table_full = _length_table(block, spec.p, width_mode)
    table_tail = _length_table(tail, spec.p, width_mode) if tail else None
    lengths = np.empty(samples, dtype=np.int64)
    batch = max(1, min(samples, 4_000_000 // max(n, 1)))
    for start in range(0, samples, batch):
        stop = min(start + batch, samples)
        seeds = [sub_seed(seed, s) for s in range(start, stop)]
        bits = _uniform_matrix(seeds, n) < spec.p
        head = bits[:, :full * block].reshape(len(seeds), full, block)
        ks = head.sum(axis=2)
        total = table_full[ks].sum(axis=1)
        if tail:
            total = total + table_tail[bits[:, full * block:].sum(axis=1)]
        lengths[start:stop] = total
    return lengths


def run_row(spec, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED,
            width_mode="capacity"):
    if samples < 1:
        raise InvalidModel(f"samples {samples} < 1")
    if spec.block_len:
        exact = block_mean_length(spec.n, spec.p, spec.block_len, width_mode)
    else:
        exact = exact_mean_length(spec.n, spec.p, width_mode)
    lengths = sample_lengths(spec, samples, seed, width_mode)
    return ExperimentRow(
        model=spec.model,
        n=spec.n,
        p=spec.p,
        block_len=spec.block_len,
        entropy_bits=sequence_entropy(spec.n, spec.p),
        exact_mean=exact,
        mc_mean=float(lengths.mean()),
        mc_std=float(lengths.std(ddof=1)) if samples > 1 else 0.0,
        samples=samples,
        seed=seed,
        width_mode=width_mode)


def worker_count():
    raw = os.environ.get("BZC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_experiment(kind, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED,
                   width_mode="capacity"):
    """All rows for a preset, in preset order regardless of thread count."""
    specs = models_for_kind(kind)
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(
                lambda s: run_row(s, samples, seed, width_mode), specs))
    return [run_row(s, samples, seed, width_mode) for s in specs]


def write_csv(rows, path):
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.csv_row() + "\n")
