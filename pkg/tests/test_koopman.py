import numpy as np
import pytest
from hypothesis import given, strategies as st

from freecorr import koopman
from freecorr.cesaro import AveragingSchedule
from freecorr.koopman import (
    FiniteRankOperator,
    FourierObservable,
    R,
    RankOneOperator,
    asymptotic_check,
    evolve,
    inner,
    multi_correlation,
)

GRID = np.arange(512) / 512


def quad_inner(f, g, t_f=0, t_g=0):
    """<f_{t_f}|g_{t_g}> by the trapezoid rule on 512 points (exact for low modes)."""
    x = GRID
    fx = f((2 ** t_f * x) % 1.0)
    gx = g((2 ** t_g * x) % 1.0)
    return np.mean(np.conj(fx) * gx)


def chain_oracle(pairs):
    """<1|f1><g1|f2>...<gn|1> for rank-one operators at times, via quadrature."""
    one = FourierObservable.constant(1)
    out = quad_inner(one, pairs[0][0].ket, 0, pairs[0][1])
    for (a, ta), (b, tb) in zip(pairs, pairs[1:]):
        out *= quad_inner(a.bra, b.ket, ta, tb)
    last, tl = pairs[-1]
    return out * quad_inner(last.bra, one, tl, 0)


def test_evolve_examples():
    e1 = FourierObservable({1: 1})
    assert evolve(e1, 3).modes == ((8, 1 + 0j),)
    const = FourierObservable.constant(2.5)
    assert evolve(const, 17) == const
    with pytest.raises(ValueError):
        evolve(e1, -1)


def test_big_modes_stay_exact():
    f = FourierObservable({3: 1, -1: 0.5})
    g = evolve(f, 128)
    assert dict(g.modes)[3 * 2**128] == 1
    assert inner(g, evolve(f, 127)) == 0
    assert koopman.exactly_mixed(f, FourierObservable({2: 1}), 1)


@given(st.integers(0, 10**6), st.integers(0, 3), st.integers(0, 3))
def test_inner_matches_quadrature(seed, s, t):
    rng = np.random.default_rng(seed)
    f, g = koopman.random_observable(rng), koopman.random_observable(rng)
    assert inner(evolve(f, s), evolve(g, t)) == pytest.approx(quad_inner(f, g, s, t), abs=1e-10)


@given(st.integers(0, 10**6), st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_multi_correlation_matches_quadrature(seed, times):
    rng = np.random.default_rng(seed)
    ops = [koopman.random_rank_one(rng) for _ in times]
    got = multi_correlation(list(zip(ops, times)))
    assert got == pytest.approx(chain_oracle(list(zip(ops, times))), abs=1e-9)


def test_single_operator_and_identity():
    f = FourierObservable({0: 0.3 + 0.4j, 2: 1})
    assert multi_correlation([(R(f), 5)]) == pytest.approx(abs(f.mean) ** 2)
    ident = FiniteRankOperator((), 1)
    assert multi_correlation([(ident, 0), (ident, 9)]) == 1


def test_exact_mixing_of_two_operators():
    rng = np.random.default_rng(1)
    A, B = koopman.random_rank_one(rng), koopman.random_rank_one(rng)
    d = koopman.mixing_gap([A, B])
    for t in range(d, d + 6):
        assert multi_correlation([(A, 0), (B, t)]) == pytest.approx(A.mean() * B.mean(), abs=1e-12)


@given(st.integers(0, 10**6), st.integers(0, 3), st.integers(0, 3))
def test_mixing_threshold(seed, kf, kg):
    rng = np.random.default_rng(seed)
    f = koopman.random_observable(rng, max_mode=kf)
    g = koopman.random_observable(rng, max_mode=kg)
    for t in range(8):
        if koopman.exactly_mixed(f, g, t):
            assert inner(f, evolve(g, t)) == pytest.approx(f.mean.conjugate() * g.mean, abs=1e-12)


def test_same_time_product_time_invariant():
    rng = np.random.default_rng(7)
    A, C = koopman.random_rank_one(rng), koopman.random_rank_one(rng)
    ref = multi_correlation([(A, 0), (C, 0)])
    for t in range(31):
        assert multi_correlation([(A, t), (C, t)]) == pytest.approx(ref, rel=1e-12)


def test_centering():
    rng = np.random.default_rng(3)
    A = FiniteRankOperator.of(koopman.random_rank_one(rng)).centered()
    assert abs(A.mean()) < 1e-15
    assert asymptotic_check([1], [A], AveragingSchedule.equal(1, 8)).estimate == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("copies", [[1], [1, 2], [1, 2, 1], [1, 2, 1, 2]])
def test_centered_words_numerically(copies):
    rng = np.random.default_rng(len(copies))
    for _ in range(5):
        ops = [FiniteRankOperator.of(koopman.random_rank_one(rng)).centered() for _ in copies]
        res = asymptotic_check(copies, ops, AveragingSchedule.equal(len(set(copies)), 64))
        assert res.error < 1e-3
        if copies != [1, 2, 1]:
            assert abs(res.prediction) < 1e-12


def test_prediction_closed_form_121():
    rng = np.random.default_rng(5)
    A, B, C = (FiniteRankOperator.of(koopman.random_rank_one(rng)) for _ in range(3))
    AC = multi_correlation([(A, 0), (C, 0)])
    expected = A.mean() * B.mean() * C.mean() - B.mean() * AC
    res = asymptotic_check([1, 2, 1], [A.centered(), B.centered(), C.centered()], AveragingSchedule.equal(2, 32))
    assert res.prediction == pytest.approx(expected, abs=1e-12)
    assert res.estimate == pytest.approx(expected, abs=1e-12)


def test_observable_file_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    op = FiniteRankOperator.of(koopman.random_rank_one(rng), (2, koopman.random_rank_one(rng)), identity=0.5)
    path = tmp_path / "X.obs"
    path.write_text(koopman.format_observable_file(op, center=True))
    back, center = koopman.parse_observable_file(path)
    assert center and back == op


def test_observable_file_shorthand(tmp_path):
    path = tmp_path / "A.obs"
    path.write_text("# R(f)\nmode 0 = 0.5\nmode 1 = 0.1,0.2\n")
    op, center = koopman.parse_observable_file(path)
    f = FourierObservable({0: 0.5, 1: 0.1 + 0.2j})
    assert not center and op.terms == ((1, RankOneOperator(f, f)),)


@pytest.mark.parametrize("text", ["bra\n", "mode x = 1\n", "mode 1 = a,b\n", "frobnicate\n", "\n",
                                  "mode 1 = 1\nket\nmode 2 = 1\n"])
def test_observable_file_errors(tmp_path, text):
    path = tmp_path / "bad.obs"
    path.write_text(text)
    with pytest.raises(koopman.ObservableFileError):
        koopman.parse_observable_file(path)
