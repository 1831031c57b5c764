"""Bit-granular I/O and the container format shared by all codec modes.

Container layout (little-endian, 34 bytes of header, then payload):

    bytes  0-3   magic, ASCII "BZC1"
    byte   4     version, 0x01
    byte   5     mode: 0=sequence-direct, 1=sequence-block,
                       2=graph-direct,    3=graph-block
    bytes  6-13  n_or_v, u64: sequence length n, or vertex count v
    bytes 14-21  p_bits, u64: IEEE-754 binary64 pattern of p
    bytes 22-25  block_len, u32 (0 for the direct modes)
    bytes 26-33  payload_bit_count, u64
    bytes 34-    payload bits, packed MSB-first, final byte zero-padded

Bits are packed MSB-first within each byte so a hex dump reads in the
same order as the codeword bit strings.
"""

import math
import struct
from dataclasses import dataclass

from .errors import (
    BadMagic,
    BadMode,
    BadProbability,
    BadVersion,
    PayloadExhausted,
    PayloadSizeMismatch,
)

MAGIC = b"BZC1"
VERSION = 1

MODE_SEQ_DIRECT = 0
MODE_SEQ_BLOCK = 1
MODE_GRAPH_DIRECT = 2
MODE_GRAPH_BLOCK = 3

_HEADER_STRUCT = struct.Struct("<4sBBQQIQ")
HEADER_SIZE = _HEADER_STRUCT.size  # 34


class Bits:
    """An immutable sequence of bits.

    Stored as (length, value) where the first bit of the sequence is the
    most significant bit of ``value``.  The empty sequence is Bits(0, 0).
    """

    __slots__ = ("length", "value")

    def __init__(self, length, value):
        if length < 0:
            raise ValueError("negative bit length")
        if value < 0 or value >> length:
            raise ValueError(f"value {value:#x} does not fit in {length} bits")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, val):
        raise AttributeError("Bits is immutable")

    @classmethod
    def from_string(cls, s):
        s = s.strip()
        if s and set(s) - {"0", "1"}:
            raise ValueError("bit string may contain only '0' and '1'")
        return cls(len(s), int(s, 2) if s else 0)

    @classmethod
    def from_iterable(cls, it):
        v = 0
        n = 0
        for b in it:
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            v = (v << 1) | b
            n += 1
        return cls(n, v)

    def to01(self):
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_bytes_msb(self):
        """Left-aligned byte packing; returns (bytes, bit count)."""
        nbytes = (self.length + 7) // 8
        pad = 8 * nbytes - self.length
        return (self.value << pad).to_bytes(nbytes, "big"), self.length

    def popcount(self):
        return self.value.bit_count()

    def one_positions(self):
        """Positions of the 1-bits counted from the right (LSB = 0), ascending."""
        n = self.length
        if n == 0 or self.value == 0:
            return []
        if n <= 256:
            out = []
            v = self.value
            while v:
                low = v & -v
                out.append(low.bit_length() - 1)
                v ^= low
            return out
        # bulk path: unpack the underlying bytes once instead of shifting a
        # large integer k times
        import numpy as np

        nbytes = (n + 7) // 8
        raw = self.value.to_bytes(nbytes, "big")
        arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
        # arr[0] is the MSB of the padded field; bit position = len(arr)-1-i
        idx = np.nonzero(arr)[0]
        return (len(arr) - 1 - idx)[::-1].tolist()

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - i)) & 1

    def __iter__(self):
        for i in range(self.length):
            yield (self.value >> (self.length - 1 - i)) & 1

    def __add__(self, other):
        return Bits(self.length + other.length,
                    (self.value << other.length) | other.value)

    def __eq__(self, other):
        return (isinstance(other, Bits)
                and self.length == other.length
                and self.value == other.value)

    def __hash__(self):
        return hash((self.length, self.value))

    def __repr__(self):
        if self.length <= 64:
            return f"Bits('{self.to01()}')"
        return f"Bits(length={self.length})"


class BitWriter:
    """Accumulates bit strings MSB-first into a byte buffer."""

    def __init__(self):
        self._buf = bytearray()
        self._pending = 0
        self._pending_len = 0
        self._closed = False

    def write(self, bits):
        if self._closed:
            raise ValueError("writer already closed")
        acc = (self._pending << bits.length) | bits.value
        total = self._pending_len + bits.length
        rem = total & 7
        nbytes = total >> 3
        if nbytes:
            self._buf += (acc >> rem).to_bytes(nbytes, "big")
        self._pending = acc & ((1 << rem) - 1)
        self._pending_len = rem

    def bits_written(self):
        return len(self._buf) * 8 + self._pending_len

    def close(self):
        """Zero-pad the final partial byte and return (payload, bit_count)."""
        bit_count = self.bits_written()
        if self._pending_len:
            self._buf.append(self._pending << (8 - self._pending_len))
            self._pending = 0
            self._pending_len = 0
        self._closed = True
        return bytes(self._buf), bit_count


class BitReader:
    """Reads bit strings MSB-first from a payload with a known bit count."""

    def __init__(self, data, bit_count):
        if not 0 <= bit_count <= 8 * len(data):
            raise PayloadSizeMismatch(
                f"bit count {bit_count} does not fit in {len(data)} bytes")
        self._data = data
        self._bit_count = bit_count
        self._pos = 0

    @property
    def position(self):
        return self._pos

    def remaining(self):
        return self._bit_count - self._pos

    def read(self, count):
        if count < 0:
            raise ValueError("negative read")
        if count == 0:
            return Bits(0, 0)
        if self._pos + count > self._bit_count:
            raise PayloadExhausted(
                f"need {count} bits at offset {self._pos}, "
                f"payload holds {self._bit_count}")
        start = self._pos
        end = start + count
        first = start >> 3
        last = (end + 7) >> 3
        chunk = int.from_bytes(self._data[first:last], "big")
        chunk >>= (last << 3) - end
        self._pos = end
        return Bits(count, chunk & ((1 << count) - 1))


@dataclass(frozen=True)
class ContainerHeader:
    mode: int
    n_or_v: int
    p: float
    block_len: int
    payload_bit_count: int

    def validate(self):
        if self.mode not in (MODE_SEQ_DIRECT, MODE_SEQ_BLOCK,
                             MODE_GRAPH_DIRECT, MODE_GRAPH_BLOCK):
            raise BadMode(f"mode {self.mode}")
        blocked = self.mode in (MODE_SEQ_BLOCK, MODE_GRAPH_BLOCK)
        if blocked != (self.block_len > 0):
            raise BadMode(
                f"mode {self.mode} with block_len {self.block_len}")
        if math.isnan(self.p) or not 0.0 < self.p < 1.0:
            raise BadProbability(f"p = {self.p!r}")
        if self.n_or_v < 0 or self.payload_bit_count < 0:
            raise BadMode("negative header field")


def write_header(header):
    header.validate()
    (p_bits,) = struct.unpack("<Q", struct.pack("<d", header.p))
    return _HEADER_STRUCT.pack(MAGIC, VERSION, header.mode, header.n_or_v,
                               p_bits, header.block_len,
                               header.payload_bit_count)


def read_header(data):
    if len(data) < HEADER_SIZE:
        raise BadMagic(f"container too short ({len(data)} bytes)")
    magic, version, mode, n_or_v, p_bits, block_len, payload_bits = (
        _HEADER_STRUCT.unpack_from(data))
    if magic != MAGIC:
        raise BadMagic(f"magic {magic!r}")
    if version != VERSION:
        raise BadVersion(f"version {version}")
    (p,) = struct.unpack("<d", struct.pack("<Q", p_bits))
    header = ContainerHeader(mode=mode, n_or_v=n_or_v, p=p,
                             block_len=block_len,
                             payload_bit_count=payload_bits)
    header.validate()
    return header
