"""Command-line front end: compress, decompress, experiment, bench.

Exit status: 0 on success, 1 on usage errors, 2 on data errors (bad
input files, corrupt containers, invalid parameters).
"""

import argparse
import sys
import time

from . import bitio, codec, graph
from .bitio import Bits
from .errors import BzcError
from .experiments import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EXPERIMENT_KINDS,
    draw_instance,
    run_experiment,
    write_csv,
)

BENCH_DEFAULT_SIZES = "100000,200000,400000,800000,1600000"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="bzc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="compress a bit file or edge list")
    c.add_argument("input", help="input path")
    c.add_argument("--p", type=float, required=True,
                   help="Bernoulli/edge probability in (0,1)")
    c.add_argument("--mode", choices=("direct", "block"), default="direct")
    c.add_argument("--block-len", type=int, default=0,
                   help="block length (required with --mode block)")
    c.add_argument("--format", choices=("bits", "edgelist"), default="bits")
    c.add_argument("--output", help="container path (default: INPUT.bzc)")
    c.set_defaults(func=cmd_compress)

    d = sub.add_parser("decompress", help="reconstruct the original text")
    d.add_argument("input", help="container path")
    d.add_argument("--output", help="output path (default: stdout)")
    d.set_defaults(func=cmd_decompress)

    e = sub.add_parser("experiment", help="run a preset and write a CSV")
    e.add_argument("--kind", choices=EXPERIMENT_KINDS, required=True)
    e.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    e.add_argument("--seed", type=int, default=DEFAULT_SEED)
    e.add_argument("--width-mode", choices=("capacity", "loglog"),
                   default="capacity")
    e.add_argument("--output", required=True, help="CSV path")
    e.set_defaults(func=cmd_experiment)

    b = sub.add_parser("bench", help="time direct encode+decode per length")
    b.add_argument("--sizes", default=BENCH_DEFAULT_SIZES,
                   help="comma-separated sequence lengths")
    b.add_argument("--p", type=float, default=0.1)
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--seed", type=int, default=DEFAULT_SEED)
    b.set_defaults(func=cmd_bench)
    return parser


def cmd_compress(args):
    if args.mode == "block" and args.block_len < 1:
        raise _UsageError("--mode block requires --block-len >= 1")
    with open(args.input) as fh:
        text = fh.read()
    if args.format == "bits":
        bits = Bits.from_string("".join(text.split()))
        original_bits = bits.length
        data = codec.compress_bits(bits, args.p, args.mode, args.block_len)
    else:
        g = graph.parse_edgelist(text)
        original_bits = graph.edge_bit_count(g.v)
        data = graph.encode_graph(g, args.p, args.mode, args.block_len)
    out = args.output or args.input + ".bzc"
    with open(out, "wb") as fh:
        fh.write(data)
    payload_bits = bitio.read_header(data).payload_bit_count
    print(f"original bits: {original_bits}")
    print(f"compressed bits: {payload_bits}"
          f" (container: {len(data)} bytes)")
    print(f"ratio: {payload_bits / original_bits:.4f}")
    return 0


def cmd_decompress(args):
    with open(args.input, "rb") as fh:
        data = fh.read()
    header = bitio.read_header(data)
    if header.mode in (bitio.MODE_GRAPH_DIRECT, bitio.MODE_GRAPH_BLOCK):
        text = graph.format_edgelist(graph.decode_graph(data))
    else:
        bits, _ = codec.decompress_bits(data)
        text = bits.to01() + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_experiment(args):
    rows = run_experiment(args.kind, samples=args.samples, seed=args.seed,
                          width_mode=args.width_mode)
    write_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def cmd_bench(args):
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise _UsageError(f"bad --sizes list {args.sizes!r}") from None
    if args.reps < 0:
        raise _UsageError("--reps must be >= 0")
    print(f"{'n':>9}  {'encode_s':>9}  {'decode_s':>9}  "
          f"{'total_s':>9}  {'code_bits':>10}")
    totals = {}
    for n in sizes:
        if args.reps == 0:
            continue
        x = draw_instance(n, args.p, args.seed)
        model = codec.BernoulliModel(n, args.p)
        enc = dec = 0.0
        code_bits = 0
        for _ in range(args.reps):
            t0 = time.perf_counter()
            cw = codec.encode_sequence(x, model)
            t1 = time.perf_counter()
            data, nbits = cw.to_bytes_msb()
            reader = bitio.BitReader(data, nbits)
            t2 = time.perf_counter()
            y = codec.decode_sequence(reader, model)
            t3 = time.perf_counter()
            if y != x:
                raise BzcError(f"bench roundtrip failed at n={n}")
            enc += t1 - t0
            dec += t3 - t2
            code_bits = cw.length
        enc /= args.reps
        dec /= args.reps
        totals[n] = enc + dec
        print(f"{n:>9}  {enc:>9.4f}  {dec:>9.4f}  "
              f"{enc + dec:>9.4f}  {code_bits:>10}")
    for n in sizes:
        if n in totals and 2 * n in totals and totals[n] > 0:
            print(f"ratio time({2 * n})/time({n}) = "
                  f"{totals[2 * n] / totals[n]:.3f}")
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except BzcError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
