import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcapolar.crc import (
    CRC24C,
    CrcError,
    CrcSpec,
    CrcTracker,
    build_crc_matrix,
    crc_encode,
    crc_oracle_remainder,
    crc_parity,
    tracker_absorb,
)

from conftest import TOY_CRC3


def test_crc24_polynomial_coefficients():
    assert CRC24C.degree == 24
    assert set(CRC24C.exponents) == {24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0}


@pytest.mark.parametrize(
    "coeffs", [(0, 1, 1, 1), (1, 1, 0, 0), (1, 2, 0, 1)], ids=["no-constant", "no-leading", "non-bit"]
)
def test_malformed_polynomial_rejected(coeffs):
    with pytest.raises(CrcError):
        CrcSpec(3, coeffs)


def test_zero_message_length_rejected():
    with pytest.raises(CrcError):
        build_crc_matrix(TOY_CRC3, 0)


def test_toy_single_row():
    # x^3 mod (x^3 + x + 1) = x + 1
    m = build_crc_matrix(TOY_CRC3, 1)
    assert m.rows.tolist() == [[0, 1, 1]]


def test_last_row_is_polynomial_tail():
    m = build_crc_matrix(CRC24C, 32)
    assert m.rows[-1].tolist() == [CRC24C.coeffs[24 - i] for i in range(1, 25)]


def test_rows_follow_recursion():
    m = build_crc_matrix(CRC24C, 40)
    C, g, P = m.rows, CRC24C.coeffs, 24
    for k in range(39):
        for i in range(1, P):
            assert C[k, i - 1] == C[k + 1, i] ^ (C[k + 1, 0] & g[P - i])
        assert C[k, P - 1] == C[k + 1, 0] & g[0]


def test_crc24_rows_match_unit_vector_division():
    m = build_crc_matrix(CRC24C, 32)
    for r in range(32):
        e = np.zeros(32, dtype=np.uint8)
        e[r] = 1
        assert np.array_equal(m.rows[r], crc_oracle_remainder(e, CRC24C))


def test_toy_pencil_division():
    # x^6 mod (x^3 + x + 1) = x^2 + 1
    a = [1, 0, 0, 0]
    m = build_crc_matrix(TOY_CRC3, 4)
    assert crc_encode(a, m).tolist() == [1, 0, 0, 0, 1, 0, 1]
    assert crc_oracle_remainder(a, TOY_CRC3).tolist() == [1, 0, 1]


def test_zero_message():
    m = build_crc_matrix(CRC24C, 32)
    assert not crc_encode(np.zeros(32, np.uint8), m).any()
    assert not crc_oracle_remainder(np.zeros(32, np.uint8), CRC24C).any()


def test_encode_length_mismatch():
    with pytest.raises(CrcError):
        crc_encode(np.zeros(31, np.uint8), build_crc_matrix(CRC24C, 32))


@pytest.mark.parametrize("A", range(1, 13))
def test_toy_exhaustive_against_oracle(A):
    m = build_crc_matrix(TOY_CRC3, A)
    msgs = np.array(list(itertools.product((0, 1), repeat=A)), dtype=np.uint8)
    tails = crc_parity(msgs, m)
    for a, tail in zip(msgs, tails):
        assert np.array_equal(tail, crc_oracle_remainder(a, TOY_CRC3))


@given(st.lists(st.integers(0, 1), min_size=32, max_size=32), st.lists(st.integers(0, 1), min_size=32, max_size=32))
def test_parity_is_linear(a, b):
    m = build_crc_matrix(CRC24C, 32)
    a, b = np.array(a, np.uint8), np.array(b, np.uint8)
    assert np.array_equal(crc_parity(a ^ b, m), crc_parity(a, m) ^ crc_parity(b, m))


@given(st.data())
def test_tracker_any_order_gives_parity(data):
    A = data.draw(st.sampled_from([32, 128, 140]))
    m = build_crc_matrix(CRC24C, A)
    a = np.array(data.draw(st.lists(st.integers(0, 1), min_size=A, max_size=A)), np.uint8)
    order = data.draw(st.permutations(range(A)))
    t = CrcTracker(m)
    for k in order:
        t = tracker_absorb(t, k, int(a[k]))
    assert t.consumed == A
    assert np.array_equal(t.bits(), crc_parity(a, m))


def test_tracker_zero_bit_is_noop():
    m = build_crc_matrix(CRC24C, 32)
    t = CrcTracker(m).absorb(5, 1)
    assert t.absorb(9, 0).accumulators == t.accumulators


def test_tracker_rejects_duplicates_and_range():
    t = CrcTracker(build_crc_matrix(CRC24C, 32)).absorb(3, 1)
    with pytest.raises(CrcError):
        t.absorb(3, 0)
    with pytest.raises(CrcError):
        t.absorb(32, 1)
    with pytest.raises(CrcError):
        t.absorb(-1, 1)
