"""End-to-end sequence codec: weight codeword followed by the rank.

Direct mode codes the whole sequence as one codeword.  Block mode splits
it into fixed-length chunks coded independently (the final chunk may be
shorter and uses parameters derived for its own length).
"""

from dataclasses import dataclass
from functools import lru_cache

from . import bitio
from .bitio import BitReader, Bits, BitWriter, ContainerHeader
from .combinatorics import rank, rank_bit_width, unrank
from .countcode import (
    count_code_length,
    decode_count,
    derive_params,
    encode_count,
)
from .errors import InvalidModel, LengthMismatch, PayloadSizeMismatch


@dataclass(frozen=True)
class BernoulliModel:
    n: int
    p: float

    def __post_init__(self):
        if self.n < 1:
            raise InvalidModel(f"sequence length {self.n} < 1")
        derive_params(self.n, self.p)  # validates p

    @property
    def q(self):
        return 1.0 - self.p

    @property
    def params(self):
        return _params(self.n, self.p)


@lru_cache(maxsize=256)
def _params(n, p):
    return derive_params(n, p)


def encode_sequence(x, model):
    if x.length != model.n:
        raise LengthMismatch(
            f"sequence length {x.length}, model expects {model.n}")
    k = x.popcount()
    count_bits = encode_count(k, model.params)
    width = rank_bit_width(model.n, k)
    return count_bits + Bits(width, rank(x, k))


def decode_sequence(reader, model):
    k, _ = decode_count(reader, model.params)
    width = rank_bit_width(model.n, k)
    r = reader.read(width)
    return unrank(r.value, model.n, k)


def codeword_length(k, model):
    """Codeword length for any sequence of weight k under `model`."""
    return count_code_length(k, model.params) + rank_bit_width(model.n, k)


def block_sizes(total_len, block_len):
    if total_len < 1:
        raise InvalidModel(f"sequence length {total_len} < 1")
    if block_len < 1:
        raise InvalidModel(f"block length {block_len} < 1")
    full, tail = divmod(total_len, block_len)
    return [block_len] * full + ([tail] if tail else [])


def encode_blocks(x, p, block_len):
    writer = BitWriter()
    data, nbits = x.to_bytes_msb()
    reader = BitReader(data, nbits)
    for m in block_sizes(x.length, block_len):
        writer.write(encode_sequence(reader.read(m), BernoulliModel(m, p)))
    payload, bit_count = writer.close()
    return _bits_from_payload(payload, bit_count)


def decode_blocks(reader, total_len, p, block_len):
    writer = BitWriter()
    for m in block_sizes(total_len, block_len):
        writer.write(decode_sequence(reader, BernoulliModel(m, p)))
    payload, bit_count = writer.close()
    return _bits_from_payload(payload, bit_count)


def _bits_from_payload(payload, bit_count):
    value = int.from_bytes(payload, "big") >> (8 * len(payload) - bit_count)
    return Bits(bit_count, value)


# --- container level ---

def compress_bits(x, p, mode="direct", block_len=0):
    """Pack one sequence into a standalone container (header + payload)."""
    if mode == "direct":
        payload_bits = encode_sequence(x, BernoulliModel(x.length, p))
        header_mode = bitio.MODE_SEQ_DIRECT
        block_len = 0
    elif mode == "block":
        payload_bits = encode_blocks(x, p, block_len)
        header_mode = bitio.MODE_SEQ_BLOCK
    else:
        raise InvalidModel(f"unknown mode {mode!r}")
    return build_container(header_mode, x.length, p, block_len, payload_bits)


def build_container(header_mode, n_or_v, p, block_len, payload_bits):
    writer = BitWriter()
    writer.write(payload_bits)
    payload, bit_count = writer.close()
    header = ContainerHeader(mode=header_mode, n_or_v=n_or_v, p=p,
                             block_len=block_len,
                             payload_bit_count=bit_count)
    return bitio.write_header(header) + payload


def open_container(data):
    """Validate a container and return (header, payload reader)."""
    header = bitio.read_header(data)
    payload = data[bitio.HEADER_SIZE:]
    expected = (header.payload_bit_count + 7) // 8
    if len(payload) != expected:
        raise PayloadSizeMismatch(
            f"payload holds {len(payload)} bytes, header implies {expected}")
    return header, BitReader(payload, header.payload_bit_count)


def decompress_bits(data):
    """Inverse of compress_bits; returns (bits, header) for any mode."""
    header, reader = open_container(data)
    if header.mode in (bitio.MODE_SEQ_DIRECT, bitio.MODE_SEQ_BLOCK):
        n = header.n_or_v
    else:
        n = header.n_or_v * (header.n_or_v - 1) // 2
    if header.mode in (bitio.MODE_SEQ_DIRECT, bitio.MODE_GRAPH_DIRECT):
        bits = decode_sequence(reader, BernoulliModel(n, header.p))
    else:
        bits = decode_blocks(reader, n, header.p, header.block_len)
    if reader.remaining():
        raise PayloadSizeMismatch(
            f"{reader.remaining()} unconsumed payload bits")
    return bits, header
