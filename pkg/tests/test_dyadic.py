import threading
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chamanara.dyadic import (DyadicRational, PrefixThen, RationalStream, ShiftOf, Terminating,
                              compare_streams, compare_to_dyadic, digit_at, explicit_sequence,
                              exponential_sequence, polynomial_sequence, prefix_then,
                              rational_from_json, rational_to_json, same_stream, shift_of,
                              sparse_complement_digits, sparse_sum_digits, stream_of,
                              to_dyadic_approx, verify_divergence)


def partial_sum(seq, upto):
    """High-precision oracle: sum of 2^-s over terms s <= upto."""
    return sum((Fraction(1, 2 ** s) for s in seq.terms_up_to(upto)), Fraction(0))


# DyadicRational

def test_dyadic_canonical_form():
    assert DyadicRational(6, 3) == DyadicRational(3, 2)
    assert DyadicRational(6, 3).numerator == 3
    assert DyadicRational(0, 9).exponent == 0
    assert DyadicRational(8, 2) == 2


def test_dyadic_rejects_negative_exponent():
    with pytest.raises(ValueError):
        DyadicRational(1, -1)


@given(st.integers(-10**6, 10**6), st.integers(0, 40), st.integers(-10**6, 10**6), st.integers(0, 40))
def test_dyadic_arithmetic_matches_fraction(a, e, b, f):
    p, q = DyadicRational(a, e), DyadicRational(b, f)
    P, Q = Fraction(a, 2 ** e), Fraction(b, 2 ** f)
    assert (p + q).value == P + Q
    assert (p - q).value == P - Q
    assert (p * q).value == P * Q
    assert (p < q) == (P < Q)
    assert hash(p) == hash(P)
    assert p == P


def test_from_fraction_rejects_non_dyadic():
    with pytest.raises(ValueError):
        DyadicRational.from_fraction(Fraction(1, 3))


@given(st.fractions(min_value=0, max_value=1))
def test_json_round_trip(q):
    assert rational_from_json(rational_to_json(q)) == q


def test_json_infinity_sentinel():
    assert rational_to_json(float("inf")) == "inf"
    assert rational_from_json("inf") == float("inf")


# sequences and divergence

def test_polynomial_sequence_terms(squares):
    assert squares.terms(5) == [1, 4, 9, 16, 25]
    assert 16 in squares and 17 not in squares


def test_verify_divergence_squares(squares):
    assert squares.witness(5) == 2
    assert verify_divergence(squares, 5, 100)


def test_verify_divergence_mersenne(mersenne):
    assert mersenne.terms(4) == [1, 3, 7, 15]
    assert mersenne.witness(16) == 4
    assert verify_divergence(mersenne, 16, 50)


def test_linear_sequence_has_no_witness():
    with pytest.raises(ValueError):
        polynomial_sequence([0, 2])


def test_constant_increment_fails_divergence():
    from chamanara.dyadic import SparseExponentSequence
    seq = SparseExponentSequence(lambda n: 2 * n, lambda M: 1, "even")
    check = verify_divergence(seq, 3, 40)
    assert not check
    assert check.violating_index == 1


def test_horizon_below_witness_is_rejected(squares):
    with pytest.raises(ValueError):
        verify_divergence(squares, 1000, 3)


@pytest.mark.parametrize("M", [1, 2, 5, 17, 100, 1000])
def test_witnesses_hold_on_long_prefixes(M, squares, mersenne):
    cubes = polynomial_sequence([1, 0, 0, 1])
    for seq in (squares, mersenne, cubes, exponential_sequence(3, 0)):
        N = seq.witness(M)
        assert verify_divergence(seq, M, N + 200)


def test_explicit_sequence_continues_with_tail(squares):
    seq = explicit_sequence([2, 3, 5], squares)
    assert seq.terms(6) == [2, 3, 5, 9, 16, 25]
    assert verify_divergence(seq, 8, seq.witness(8) + 50)


def test_non_increasing_values_rejected(squares):
    with pytest.raises(ValueError):
        explicit_sequence([3, 3], squares)


# streams

def test_sparse_sum_digits(squares):
    y = sparse_sum_digits(squares)
    assert digit_at(y, 4) == 1
    assert digit_at(y, 2) == 0
    assert y.digit_string(9) == "100100001"


def test_sparse_complement_digits(squares):
    x = sparse_complement_digits(squares)
    assert digit_at(x, 2) == 1
    assert x.digit_string(9) == "011011110"
    # subtraction oracle
    for m in (4, 10, 30, 90):
        assert x.approx(m).value <= 1 - partial_sum(squares, 200) < x.approx(m).value + Fraction(1, 2 ** m)


def test_to_dyadic_approx_examples(squares):
    assert to_dyadic_approx(Terminating(Fraction(1, 4)), 8) == Fraction(1, 4)
    assert to_dyadic_approx(sparse_sum_digits(squares), 4) == Fraction(9, 16)
    assert to_dyadic_approx(sparse_complement_digits(squares), 4) == Fraction(6, 16)
    with pytest.raises(ValueError):
        to_dyadic_approx(Terminating(0), 0)


@pytest.mark.parametrize("m", [1, 3, 8, 20, 64])
def test_approximation_error_bound(m, squares, mersenne):
    for seq in (squares, mersenne):
        for s, true in ((sparse_sum_digits(seq), partial_sum(seq, 400)),
                        (sparse_complement_digits(seq), 1 - partial_sum(seq, 400))):
            a = to_dyadic_approx(s, m).value
            assert a <= true < a + Fraction(1, 2 ** m)
            assert a <= to_dyadic_approx(s, 4 * m).value


def test_first_complement_digit_is_zero_when_s1_is_one(squares, mersenne):
    for seq in (squares, mersenne):
        assert digit_at(sparse_complement_digits(seq), 1) == 0


def test_complement_identity(squares, mersenne):
    for seq in (squares, mersenne):
        x, y = sparse_complement_digits(seq), sparse_sum_digits(seq)
        assert all(a + b == 1 for a, b in zip(x.digits(2000), y.digits(2000)))


def test_sparse_streams_have_both_digits_far_out(squares, mersenne):
    for seq in (squares, mersenne):
        for s in (sparse_sum_digits(seq), sparse_complement_digits(seq)):
            tail = s.digits(3000)[1000:]
            assert 0 in tail and 1 in tail
            assert s.eventually_constant is False


@given(st.lists(st.integers(0, 1), max_size=20), st.integers(1, 60))
def test_prefix_then_composition(prefix, i):
    tail = RationalStream(Fraction(5, 7))
    s = PrefixThen(prefix, tail)
    expected = prefix[i - 1] if i <= len(prefix) else tail.digit_at(i - len(prefix))
    assert s.digit_at(i) == expected


@given(st.lists(st.integers(0, 1), max_size=20))
def test_prefix_then_value(prefix):
    tail = RationalStream(Fraction(2, 9))
    L = len(prefix)
    head = sum((Fraction(b, 2 ** (k + 1)) for k, b in enumerate(prefix)), Fraction(0))
    assert PrefixThen(prefix, tail).exact_value == head + Fraction(2, 9) / 2 ** L


@given(st.integers(1, 10**6), st.integers(2, 30))
def test_rational_stream_matches_long_division(a, e):
    d = 2 * e + 1
    q = Fraction(a % d or 1, d)
    if q.denominator & (q.denominator - 1) == 0:
        return
    s = RationalStream(q)
    for m in (1, 7, 40):
        lo, hi = s.bounds(m)
        assert lo == hi == q
        assert s.approx(m).value <= q < s.approx(m).value + Fraction(1, 2 ** m)


def test_rational_stream_period():
    assert RationalStream(Fraction(1, 3)).preperiod_and_period() == (0, 2)
    assert RationalStream(Fraction(1, 12)).preperiod_and_period() == (2, 2)
    assert RationalStream(Fraction(1, 7)).digit_string(6) == "001001"


def test_terminating_pads_with_zeros():
    s = Terminating(Fraction(5, 8))
    assert s.digit_string(6) == "101000"
    with pytest.raises(ValueError):
        Terminating(1)


def test_shift_and_prefix_flattening(mersenne):
    y = sparse_sum_digits(mersenne)
    s = shift_of(shift_of(y, 3), 4)
    assert isinstance(s, ShiftOf) and s.base is y and s.offset == 7
    p = prefix_then([1], prefix_then([0, 1], y))
    assert isinstance(p, PrefixThen) and p.prefix == bytes([1, 0, 1]) and p.tail is y
    assert shift_of(p, 2).digit_string(10) == p.digit_string(12)[2:]


def test_same_stream_decides_equal_descriptions(mersenne):
    y = sparse_sum_digits(mersenne)
    a = prefix_then([y.digit_at(5)], shift_of(y, 5))
    assert same_stream(a, shift_of(y, 4)) is True
    assert same_stream(shift_of(y, 3), shift_of(y, 4)) is False


def test_compare_to_dyadic(squares):
    y = sparse_sum_digits(squares)
    assert compare_to_dyadic(y, Fraction(1, 2)) == 1
    assert compare_to_dyadic(y, Fraction(9, 16)) == 1
    assert compare_to_dyadic(y, Fraction(10, 16)) == -1
    assert compare_to_dyadic(Terminating(Fraction(1, 4)), Fraction(1, 4)) == 0
    assert compare_streams(y, sparse_complement_digits(squares)) == 1


def test_stream_of_coercion():
    assert isinstance(stream_of(Fraction(1, 4)), Terminating)
    assert isinstance(stream_of(Fraction(1, 3)), RationalStream)


def test_digits_are_deterministic_in_any_order(squares):
    a, b = sparse_sum_digits(squares), sparse_sum_digits(squares)
    forward = [a.digit_at(i) for i in range(1, 500)]
    backward = [b.digit_at(i) for i in range(499, 0, -1)][::-1]
    assert forward == backward
    assert [a.digit_at(i) for i in range(1, 500)] == forward


def test_concurrent_digit_reads(mersenne):
    s = shift_of(sparse_complement_digits(mersenne), 3)
    reference = sparse_complement_digits(mersenne).digits(20003)[3:]
    strides = (1, 1, 2, 3, 1, 7)
    results = {}

    def read(slot, stride):
        results[slot] = bytes(s.digit_at(i) for i in range(1, 20001, stride))

    threads = [threading.Thread(target=read, args=(i, k)) for i, k in enumerate(strides)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert s.digits(20000) == reference
    for i, k in enumerate(strides):
        assert results[i] == reference[::k]
