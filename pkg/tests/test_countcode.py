from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bzc.bitio import BitReader, Bits, BitWriter
from bzc.countcode import (
    count_code_length,
    count_parts,
    decode_count,
    derive_params,
    encode_count,
)
from bzc.errors import (
    InvalidModel,
    KOutOfRange,
    NonCanonical,
    WeightOutOfRange,
)

P_GRID = (0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99)


def reader_for(bits):
    data, nbits = bits.to_bytes_msb()
    return BitReader(data, nbits)


class TestDeriveParams:
    def test_worked_example(self):
        p = derive_params(10, 0.2)
        assert (p.floor_np, p.d_max, p.t_max, p.t_width) == (2, 8, 3, 2)

    def test_capacity_matches_loglog_at_50(self):
        p = derive_params(50, 0.1)
        assert (p.floor_np, p.d_max, p.t_max, p.t_width) == (5, 45, 5, 3)

    def test_capacity_exceeds_loglog_at_16(self):
        # ceil(log2 log2 16) = 2 cannot hold t = 4; capacity width can
        p = derive_params(16, 0.01)
        assert (p.floor_np, p.d_max, p.t_max, p.t_width) == (0, 16, 4, 3)

    def test_n_equal_one(self):
        p = derive_params(1, 0.3)
        assert p.t_width == 1

    def test_every_reachable_t_fits(self):
        for n in list(range(1, 80)) + [256, 1000]:
            for prob in P_GRID:
                params = derive_params(n, prob)
                assert (1 << params.t_width) > params.t_max

    @pytest.mark.parametrize("n,p", [(0, 0.5), (-3, 0.5), (5, 0.0),
                                     (5, 1.0), (5, float("nan"))])
    def test_invalid(self, n, p):
        with pytest.raises(InvalidModel):
            derive_params(n, p)


class TestEncode:
    def test_worked_example_k6(self):
        params = derive_params(10, 0.2)
        assert encode_count(6, params).to01() == "11001"

    def test_distance_zero(self):
        params = derive_params(10, 0.2)
        assert encode_count(2, params).to01() == "000"

    def test_k_zero(self):
        params = derive_params(10, 0.2)
        assert encode_count(0, params).to01() == "0011"

    def test_distance_zero_always_starts_with_zero(self):
        for n in range(1, 60):
            for prob in P_GRID:
                params = derive_params(n, prob)
                assert encode_count(params.floor_np, params)[0] == 0

    def test_out_of_range(self):
        params = derive_params(10, 0.2)
        for k in (-1, 11):
            with pytest.raises(WeightOutOfRange):
                encode_count(k, params)
            with pytest.raises(WeightOutOfRange):
                count_code_length(k, params)

    def test_parts_invariants(self):
        for n in (1, 2, 7, 10, 33, 64):
            for prob in P_GRID:
                params = derive_params(n, prob)
                for k in range(n + 1):
                    c = count_parts(k, params)
                    assert c.t == (c.d + 1).bit_length() - 1
                    assert c.u == c.d + 1 - (1 << c.t)
                    assert 0 <= c.u < (1 << c.t) or (c.t == 0 and c.u == 0)
                    assert c.length == 1 + params.t_width + c.t


class TestDecode:
    def test_worked_example(self):
        params = derive_params(10, 0.2)
        k, consumed = decode_count(reader_for(Bits.from_string("11001")),
                                   params)
        assert (k, consumed) == (6, 5)

    def test_inverse_of_zero_distance(self):
        params = derive_params(10, 0.2)
        k, consumed = decode_count(reader_for(Bits.from_string("000")),
                                   params)
        assert (k, consumed) == (2, 3)

    def test_non_canonical(self):
        # F=1 with t=0 implies d=0, which the encoder never emits
        params = derive_params(10, 0.2)
        with pytest.raises(NonCanonical):
            decode_count(reader_for(Bits.from_string("100")), params)

    def test_k_out_of_range(self):
        # (4, 0.2): floor_np = 0, so any F=0 distance > 0 is negative k
        params = derive_params(4, 0.2)
        assert params.t_width == 2
        bad = Bits.from_string("0011")  # F=0, t=1, u=1 -> d=2 -> k=-2
        with pytest.raises(KOutOfRange):
            decode_count(reader_for(bad), params)

    def test_roundtrip_all_weights(self):
        for n in list(range(1, 70)) + [128, 256]:
            for prob in P_GRID:
                params = derive_params(n, prob)
                for k in range(n + 1):
                    cw = encode_count(k, params)
                    got, consumed = decode_count(reader_for(cw), params)
                    assert got == k and consumed == cw.length

    def test_consumes_exactly_its_own_bits(self):
        params = derive_params(20, 0.3)
        w = BitWriter()
        for k in (0, 7, 20, 6):
            w.write(encode_count(k, params))
        payload, nbits = w.close()
        r = BitReader(payload, nbits)
        assert [decode_count(r, params)[0] for _ in range(4)] == [0, 7, 20, 6]
        assert r.remaining() == 0


class TestLengthsAndPrefix:
    def test_length_matches_encoding(self):
        for n in list(range(1, 70)) + [256]:
            for prob in P_GRID:
                params = derive_params(n, prob)
                for k in range(n + 1):
                    assert count_code_length(k, params) == \
                        encode_count(k, params).length

    def test_worked_length(self):
        params = derive_params(10, 0.2)
        assert count_code_length(6, params) == 5
        assert count_code_length(params.floor_np, params) == \
            1 + params.t_width

    def test_k0_at_50_001(self):
        params = derive_params(50, 0.01)
        assert count_code_length(0, params) == 4

    def test_monotone_in_distance(self):
        for n in (5, 17, 50, 101):
            for prob in P_GRID:
                params = derive_params(n, prob)
                lengths = {}
                for k in range(n + 1):
                    d = abs(k - params.floor_np)
                    lengths.setdefault(d, set()).add(
                        count_code_length(k, params))
                distances = sorted(lengths)
                maxima = [max(lengths[d]) for d in distances]
                assert maxima == sorted(maxima)

    @pytest.mark.parametrize("n", list(range(1, 65)) + [100, 200, 256])
    def test_prefix_free_and_kraft(self, n):
        for prob in (0.01, 0.1, 0.3, 0.5, 0.9):
            params = derive_params(n, prob)
            words = sorted(encode_count(k, params).to01()
                           for k in range(n + 1))
            assert len(set(words)) == n + 1
            assert not any(b.startswith(a)
                           for a, b in zip(words, words[1:]))
            kraft = sum(Fraction(1, 2 ** len(w)) for w in words)
            assert kraft <= 1


@given(st.integers(1, 500),
       st.floats(min_value=0.001, max_value=0.999,
                 allow_nan=False),
       st.data())
@settings(max_examples=200)
def test_roundtrip_property(n, p, data):
    params = derive_params(n, p)
    k = data.draw(st.integers(0, n))
    cw = encode_count(k, params)
    got, consumed = decode_count(reader_for(cw), params)
    assert got == k and consumed == cw.length == count_code_length(k, params)
