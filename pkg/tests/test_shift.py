import random

import pytest
from hypothesis import given, strategies as st

from freecorr import kernels, shift
from freecorr.bitstream import BitStream
from freecorr.parsing import parse_timed_word
from freecorr.shift import TimedWord, commutator_norm_sq, expectation, free_shift_expectation, reduce

from conftest import streams

times_lists = st.lists(st.integers(1, 30), max_size=12)


def oracle_reduce(times, stream, seed):
    """Apply the rewriting rules at random positions until none applies."""
    rnd = random.Random(seed)
    w = list(times)
    sign = 1
    while True:
        moves = [i for i in range(len(w) - 1) if w[i] >= w[i + 1]]
        if not moves:
            return sign, tuple(w)
        i = rnd.choice(moves)
        if w[i] == w[i + 1]:
            del w[i:i + 2]
        else:
            if stream.bit(w[i] - w[i + 1]):
                sign = -sign
            w[i], w[i + 1] = w[i + 1], w[i]


@given(times_lists, streams(), st.integers(0, 1000))
def test_reduction_confluent(times, stream, seed):
    r = reduce(times, stream)
    assert (r.sign, r.times) == oracle_reduce(times, stream, seed)
    assert list(r.times) == sorted(set(r.times))


def test_sorted_distinct_word_is_its_own_reduction():
    r = reduce([2, 5, 9], BitStream.thue_morse())
    assert r.sign == 1 and r.times == (2, 5, 9)
    assert expectation([2, 5, 9], BitStream.thue_morse()) == 0


def test_identity_and_square():
    s = BitStream.constant(1)
    assert expectation([], s) == 1
    assert expectation([4, 4], s) == 1


@given(st.integers(1, 200), st.integers(1, 200), streams())
def test_alternating_sign_formula(t1, t2, stream):
    w = TimedWord([t1, t2, t1, t2])
    expected = 1 if t1 == t2 else (-1) ** stream.bit(abs(t2 - t1))
    assert expectation(w, stream) == expected
    assert expectation(w ** 2, stream) == 1


@given(times_lists, st.integers(0, 50), streams())
def test_shift_covariance(times, k, stream):
    assert expectation(TimedWord(times).shifted(k), stream) == expectation(times, stream)


@given(st.integers(1, 100), st.integers(1, 100), streams())
def test_commutator_norm(t, s, stream):
    if t == s:
        with pytest.raises(ValueError):
            commutator_norm_sq(t, s, stream)
        return
    assert commutator_norm_sq(t, s, stream) == (1 - (-1) ** stream.bit(abs(t - s))) ** 2


def test_free_shift():
    assert free_shift_expectation([1, 2, 2, 1]) == 1
    assert free_shift_expectation([1, 2, 1, 2]) == 0
    assert free_shift_expectation([]) == 1


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
@given(times_lists, streams())
def test_backends_agree(times, stream):
    bits = stream.table(40)
    assert kernels.reduce_word(times, bits, "python") == kernels.reduce_word(times, bits, "cython")
    assert kernels.word_sign(times, bits, "python") == kernels.word_sign(times, bits, "cython")


def test_parsed_powers():
    w = parse_timed_word("(e(1) e(2))^4")
    assert w.times == (1, 2) * 4
    assert str(parse_timed_word("e(3)")) == "e(3)"


def test_shift_correlation_pointwise():
    ev = shift.ShiftCorrelation([0, 1, 0, 1], BitStream.periodic("01"))
    assert ev((3, 5)) == -1 and ev((3, 4)) == 1 and ev((3, 3)) == 1
