from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bzc import bitio
from bzc.bitio import BitReader, Bits
from bzc.codec import (
    BernoulliModel,
    block_sizes,
    codeword_length,
    compress_bits,
    decode_blocks,
    decode_sequence,
    decompress_bits,
    encode_blocks,
    encode_sequence,
)
from bzc.combinatorics import rank_bit_width
from bzc.countcode import count_code_length
from bzc.errors import (
    BadMagic,
    InvalidModel,
    LengthMismatch,
    PayloadExhausted,
    PayloadSizeMismatch,
    RankOutOfRange,
)


def reader_for(bits):
    data, nbits = bits.to_bytes_msb()
    return BitReader(data, nbits)


def roundtrip(x, model):
    return decode_sequence(reader_for(encode_sequence(x, model)), model)


class TestModel:
    def test_q(self):
        assert BernoulliModel(10, 0.2).q == 0.8

    @pytest.mark.parametrize("n,p", [(0, 0.5), (5, 0.0), (5, 1.0),
                                     (5, float("nan"))])
    def test_invalid(self, n, p):
        with pytest.raises(InvalidModel):
            BernoulliModel(n, p)


class TestSequence:
    def test_worked_example(self):
        m = BernoulliModel(4, 0.2)
        assert encode_sequence(Bits.from_string("1101"), m).to01() == "1100010"

    def test_all_zeros(self):
        m = BernoulliModel(4, 0.2)
        assert encode_sequence(Bits.from_string("0000"), m).to01() == "000"

    def test_decode_worked_examples(self):
        m = BernoulliModel(4, 0.2)
        assert decode_sequence(
            reader_for(Bits.from_string("1100010")), m).to01() == "1101"
        assert decode_sequence(
            reader_for(Bits.from_string("000")), m).to01() == "0000"

    def test_truncated_stream(self):
        m = BernoulliModel(4, 0.2)
        with pytest.raises(PayloadExhausted):
            decode_sequence(reader_for(Bits.from_string("11")), m)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            encode_sequence(Bits.from_string("101"), BernoulliModel(4, 0.2))

    def test_corrupt_rank_bits(self):
        # n=4, k=2: C(4,2)=6 needs 3 bits, so rank values 6 and 7 are junk
        m = BernoulliModel(4, 0.2)
        cw = encode_sequence(Bits.from_string("0011"), m)
        count_len = count_code_length(2, m.params)
        bad = Bits(count_len, cw.value >> 3) + Bits(3, 7)
        with pytest.raises(RankOutOfRange):
            decode_sequence(reader_for(bad), m)

    @pytest.mark.parametrize("n", range(1, 11))
    @pytest.mark.parametrize("p", [0.2, 0.5])
    def test_exhaustive_roundtrip(self, n, p):
        m = BernoulliModel(n, p)
        for v in range(1 << n):
            x = Bits(n, v)
            assert roundtrip(x, m) == x

    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
    def test_prefix_free_and_kraft(self, p):
        n = 10
        m = BernoulliModel(n, p)
        words = sorted(encode_sequence(Bits(n, v), m).to01()
                       for v in range(1 << n))
        assert len(set(words)) == 1 << n
        assert not any(b.startswith(a) for a, b in zip(words, words[1:]))
        assert sum(Fraction(1, 2 ** len(w)) for w in words) <= 1

    @given(st.integers(1, 200), st.data())
    @settings(max_examples=100)
    def test_length_law(self, n, data):
        p = data.draw(st.sampled_from([0.03, 0.2, 0.5, 0.77]))
        v = data.draw(st.integers(0, (1 << n) - 1))
        m = BernoulliModel(n, p)
        x = Bits(n, v)
        k = x.popcount()
        cw = encode_sequence(x, m)
        assert cw.length == count_code_length(k, m.params) + \
            rank_bit_width(n, k)
        assert cw.length == codeword_length(k, m)

    def test_deterministic(self):
        x = Bits.from_string("1001110100010")
        m = BernoulliModel(13, 0.31)
        assert encode_sequence(x, m) == encode_sequence(x, m)


class TestBlocks:
    def test_block_sizes(self):
        assert block_sizes(10, 5) == [5, 5]
        assert block_sizes(7, 5) == [5, 2]
        assert block_sizes(3, 5) == [3]

    def test_composition(self):
        x = Bits.from_string("1011001110")
        p = 0.3
        manual = (encode_sequence(Bits.from_string("10110"),
                                  BernoulliModel(5, p))
                  + encode_sequence(Bits.from_string("01110"),
                                    BernoulliModel(5, p)))
        assert encode_blocks(x, p, 5) == manual

    def test_remainder_uses_own_params(self):
        x = Bits.from_string("1011001")
        p = 0.3
        manual = (encode_sequence(Bits.from_string("10110"),
                                  BernoulliModel(5, p))
                  + encode_sequence(Bits.from_string("01"),
                                    BernoulliModel(2, p)))
        assert encode_blocks(x, p, 5) == manual

    def test_single_block_degenerates(self):
        x = Bits.from_string("10110")
        assert encode_blocks(x, 0.2, 99) == \
            encode_sequence(x, BernoulliModel(5, 0.2))

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=120),
           st.integers(1, 40),
           st.sampled_from([0.05, 0.3, 0.5, 0.8]))
    @settings(max_examples=120)
    def test_roundtrip(self, bits, block_len, p):
        x = Bits.from_iterable(bits)
        enc = encode_blocks(x, p, block_len)
        assert decode_blocks(reader_for(enc), x.length, p, block_len) == x

    def test_additivity_of_lengths(self):
        x = Bits.from_string("110100111010001011001")
        p = 0.4
        total = encode_blocks(x, p, 6).length
        parts = [encode_sequence(Bits.from_string(s), BernoulliModel(len(s), p)).length
                 for s in ("110100", "111010", "001011", "001")]
        assert total == sum(parts)


class TestContainer:
    def test_roundtrip_direct(self):
        x = Bits.from_string("1101001110100011")
        blob = compress_bits(x, 0.25)
        got, header = decompress_bits(blob)
        assert got == x
        assert header.mode == bitio.MODE_SEQ_DIRECT
        assert header.n_or_v == 16 and header.block_len == 0

    def test_roundtrip_block(self):
        x = Bits.from_string("11010011101000111")
        blob = compress_bits(x, 0.25, mode="block", block_len=5)
        got, header = decompress_bits(blob)
        assert got == x
        assert header.mode == bitio.MODE_SEQ_BLOCK and header.block_len == 5

    def test_tampered_magic(self):
        blob = bytearray(compress_bits(Bits.from_string("1010"), 0.5))
        blob[:4] = b"XXXX"
        with pytest.raises(BadMagic):
            decompress_bits(bytes(blob))

    def test_declared_bits_too_short(self):
        x = Bits.from_string("1101001110100011")
        blob = bytearray(compress_bits(x, 0.25))
        header = bitio.read_header(bytes(blob))
        short = header.payload_bit_count - 8
        blob[26:34] = short.to_bytes(8, "little")
        data = bytes(blob[:bitio.HEADER_SIZE + (short + 7) // 8])
        with pytest.raises(PayloadExhausted):
            decompress_bits(data)

    def test_payload_byte_count_mismatch(self):
        blob = compress_bits(Bits.from_string("1101001110100011"), 0.25)
        with pytest.raises(PayloadSizeMismatch):
            decompress_bits(blob + b"\x00")

    def test_trailing_declared_bits(self):
        x = Bits.from_string("1101001110100011")
        blob = bytearray(compress_bits(x, 0.25))
        header = bitio.read_header(bytes(blob))
        padded = header.payload_bit_count + 8
        blob[26:34] = padded.to_bytes(8, "little")
        with pytest.raises((PayloadSizeMismatch, PayloadExhausted)):
            decompress_bits(bytes(blob) + b"\x00")

    def test_unknown_mode_rejected(self):
        with pytest.raises(InvalidModel):
            compress_bits(Bits.from_string("1010"), 0.5, mode="sideways")

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=80),
           st.sampled_from([0.1, 0.5, 0.9]))
    @settings(max_examples=80)
    def test_container_roundtrip_property(self, bits, p):
        x = Bits.from_iterable(bits)
        assert decompress_bits(compress_bits(x, p))[0] == x
