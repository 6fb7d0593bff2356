import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freecorr import cesaro, kernels
from freecorr.bitstream import BitStream
from freecorr.cesaro import AveragingError, AveragingSchedule, TimePattern, average, diagonal_skip_average
from freecorr.shift import ShiftCorrelation

from conftest import streams

P1212 = TimePattern.from_copies([1, 2, 1, 2])


def shift_ev(pattern, stream, **kw):
    return ShiftCorrelation(pattern.copies, stream, **kw)


def brute_average(pattern, fn, horizons, min_gap=0):
    total = Fraction(0)
    count = 0
    for ts in itertools.product(*(range(T + 1) for T in horizons)):
        if any(abs(a - b) < min_gap for a, b in itertools.combinations(ts, 2)):
            continue
        total += fn(ts)
        count += 1
    return total / count


def test_pattern_canonical():
    p = TimePattern.from_copies([3, 7, 3, 9])
    assert p.copies == (0, 1, 0, 2) and p.distinct == 3 and p.labels == (3, 7, 9)


def test_bernoulli_alternating_band():
    est = average(P1212, shift_ev(P1212, BitStream.bernoulli(0.5, 11)), AveragingSchedule.equal(2, 2000))
    assert abs(est) <= 0.07


@pytest.mark.parametrize("stream", [BitStream.bernoulli(0.5, 2), BitStream.thue_morse(), BitStream.constant(1)])
def test_fourth_power_is_one(stream):
    p = TimePattern.from_copies([1, 2] * 4)
    assert average(p, shift_ev(p, stream), AveragingSchedule.equal(2, 200)) == 1


def test_commuting_stream_gives_one():
    assert average(P1212, shift_ev(P1212, BitStream.constant(0)), AveragingSchedule.equal(2, 200)) == 1


def test_anticommuting_stream_diagonal_only():
    # -1 off the diagonal, +1 on it
    T = 200
    est = average(P1212, shift_ev(P1212, BitStream.constant(1)), AveragingSchedule.equal(2, T))
    assert est == float(Fraction(-(T + 1) ** 2 + 2 * (T + 1), (T + 1) ** 2))


def test_diagonal_skip_examples():
    p = TimePattern.from_copies([1, 2])
    ev = shift_ev(p, BitStream.bernoulli(0.5, 1))
    assert diagonal_skip_average(p, ev, AveragingSchedule.equal(2, 100), 1) == 0
    sched = AveragingSchedule.equal(2, 50)
    const = lambda ts: 7  # noqa: E731
    assert diagonal_skip_average(p, const, sched, 5) == 7
    assert diagonal_skip_average(P1212, shift_ev(P1212, BitStream.thue_morse()), sched, 0) == \
        average(P1212, shift_ev(P1212, BitStream.thue_morse()), sched)
    with pytest.raises(AveragingError):
        diagonal_skip_average(p, const, AveragingSchedule.equal(2, 3), 10)


@given(streams(), st.integers(1, 25), st.integers(1, 25), st.integers(0, 4),
       st.lists(st.integers(1, 3), min_size=1, max_size=7))
def test_kernel_matches_pointwise_grid(stream, T1, T2, gap, word):
    p = TimePattern.from_copies(word)
    hs = (T1, T2, 6)[: p.distinct]
    ev = shift_ev(p, stream)
    expected = cesaro._grid_sum(ev, hs, gap, 1)
    assert cesaro.summed(p, ev, hs, gap, 1) == expected
    if kernels.BACKEND == "cython":
        assert cesaro.summed(p, shift_ev(p, stream, backend="python"), hs, gap, 1) == expected


def test_brute_oracle_small():
    stream = BitStream.periodic("011")
    ev = shift_ev(P1212, stream)
    fn = lambda ts: (-1) ** stream.bit(abs(ts[0] - ts[1])) if ts[0] != ts[1] else 1  # noqa: E731
    for gap in (0, 2):
        got = diagonal_skip_average(P1212, ev, (9, 13), gap) if gap else average(P1212, ev, (9, 13))
        assert got == pytest.approx(float(brute_average(P1212, fn, (9, 13), gap)), abs=1e-15)


def test_payloads_shift_generators():
    # slot payload (0, 3) means e(t) e(t+3)
    p = TimePattern.from_copies([1, 2])
    ev = ShiftCorrelation(p.copies, BitStream.constant(0), payloads=[(0, 3), (3, 0)])
    # e(t1) e(t1+3) e(t2+3) e(t2) cancels completely only when t1 == t2
    total, count = cesaro.summed(p, ev, (10, 10))
    assert total == 11 and count == 121


@given(st.integers(1, 12), st.integers(-3, 3), st.integers(-3, 3))
def test_linearity(T, a, b):
    p = TimePattern.from_copies([1, 2, 3])
    f = lambda ts: ts[0] * ts[1] - ts[2]  # noqa: E731
    g = lambda ts: (ts[0] + 2 * ts[2]) % 3  # noqa: E731
    h = lambda ts: a * f(ts) + b * g(ts)  # noqa: E731
    sched = AveragingSchedule.equal(3, T)
    lhs = Fraction(cesaro.summed(p, h, sched.horizons)[0])
    rhs = a * Fraction(cesaro.summed(p, f, sched.horizons)[0]) + b * Fraction(cesaro.summed(p, g, sched.horizons)[0])
    assert lhs == rhs


def test_factorizable_evaluator_converges_to_product():
    f = lambda t: 1 + (t % 4 == 0)  # noqa: E731  average -> 5/4
    g = lambda t: (-1) ** t + 0.5  # noqa: E731  average -> 1/2
    p = TimePattern.from_copies([1, 2])
    est = average(p, lambda ts: f(ts[0]) * g(ts[1]), AveragingSchedule.equal(2, 400))
    assert est == pytest.approx(5 / 8, abs=5e-3)


@given(streams(), st.integers(10, 60), st.integers(1, 4))
def test_diagonal_bound(stream, T, gap):
    for word in ([1, 2, 1, 2], [1, 2, 3, 1, 3, 2]):
        p = TimePattern.from_copies(word)
        ev = shift_ev(p, stream)
        sched = AveragingSchedule.equal(p.distinct, T)
        full = average(p, ev, sched)
        skip = diagonal_skip_average(p, ev, sched, gap)
        assert abs(full - skip) <= gap * p.distinct ** 2 / T


def test_threads_do_not_change_results():
    ev = shift_ev(P1212, BitStream.bernoulli(0.5, 9))
    results = {cesaro.summed(P1212, ev, (3000, 3000), 0, n) for n in (1, 2, 8)}
    assert len(results) == 1
    p = TimePattern.from_copies([1, 2])
    fn = lambda ts: 1.0 / (1 + ts[0] + 3 * ts[1])  # noqa: E731
    assert len({average(p, fn, (100, 100), n) for n in (1, 2, 8)}) == 1


def test_convergence_report():
    rep = cesaro.convergence_report(TimePattern.from_copies([1, 2]), lambda ts: 3, [10, 20, 40])
    assert rep.estimates() == [3, 3, 3] and rep.deltas() == [None, 0, 0] and rep.cauchy
    with pytest.raises(AveragingError):
        cesaro.convergence_report(P1212, lambda ts: 0, [])


def test_bernoulli_ladder_shrinks():
    rep = cesaro.convergence_report(P1212, shift_ev(P1212, BitStream.bernoulli(0.5, 3)), [100, 1000, 10000])
    est = [abs(e) for e in rep.estimates()]
    assert est[-1] < est[0]
    assert est[-1] < 3 / 10000 ** 0.5 * 10


def test_staircase_and_comparison():
    sched = AveragingSchedule.staircase(3, 4)
    assert sched.horizons == (256, 16, 4)
    p = TimePattern.from_copies([1, 2])
    eq, st_, diff = cesaro.compare_schedules(p, shift_ev(p, BitStream.constant(0)), 20)
    assert diff == pytest.approx(abs(eq - st_))


def test_bad_horizons():
    with pytest.raises(AveragingError):
        AveragingSchedule((0, 3))
    with pytest.raises(AveragingError):
        average(P1212, lambda ts: 1, (3,))
