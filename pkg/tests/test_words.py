import pytest
from hypothesis import given

from freecorr.words import (
    IDENTITY,
    Letter,
    ObservableSymbol,
    Polynomial,
    Word,
    adjoint,
    center,
    concat,
    is_alternating,
    normalize,
)

from conftest import letter_lists, polynomials

A, B, C = (ObservableSymbol(n) for n in "ABC")


def test_merge_consecutive_same_copy():
    w = normalize([Letter(1, A), Letter(1, C), Letter(2, B)])
    assert w == Word([Letter(1, (A, C)), Letter(2, B)])


def test_identity_dropped_then_neighbours_merge():
    w = normalize([Letter(1, A), Letter(2, IDENTITY), Letter(1, C)])
    assert w == Word([Letter(1, (A, C))])


def test_empty_word_is_identity():
    assert normalize([Letter(3, IDENTITY)]) == Word()
    assert str(Word()) == "1"


def test_no_relations_across_copies():
    w = normalize([Letter(1, A), Letter(2, B), Letter(1, A), Letter(2, B)])
    assert len(w) == 4
    assert w.copies == (1, 2, 1, 2)


def test_copy_index_validated():
    with pytest.raises(ValueError):
        Letter(0, A)


@given(letter_lists)
def test_normalize_idempotent(ls):
    w = normalize(ls)
    assert w.is_normal()
    assert normalize(w.letters) == w


@given(letter_lists, letter_lists, letter_lists)
def test_concat_associative(x, y, z):
    u, v, w = normalize(x), normalize(y), normalize(z)
    assert concat(concat(u, v), w) == concat(u, concat(v, w))


@given(polynomials(), polynomials(), polynomials())
def test_polynomial_ring_laws(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p


@given(polynomials(), polynomials())
def test_adjoint_antihomomorphism(p, q):
    assert adjoint(p * q) == adjoint(q) * adjoint(p)
    assert adjoint(adjoint(p)) == p


def test_adjoint_reverses_and_daggers():
    p = Polynomial.letter(1, A, C) * Polynomial.letter(2, B)
    expected = Polynomial.letter(2, B.dagger()) * Polynomial.letter(1, C.dagger(), A.dagger())
    assert adjoint(p) == expected


def test_power_and_cancellation():
    x = Polynomial.letter(1, A) - Polynomial.letter(1, A)
    assert x.is_zero()
    sq = Polynomial.letter(1, A) ** 2
    assert sq == Polynomial.letter(1, A, A)


def test_centering():
    c = center(A, lambda mono: 3).at(2)
    assert c == Polynomial.letter(2, A) - Polynomial.scalar(3)
    assert center(IDENTITY, None).at(1).is_zero()


def test_relabel():
    p = Polynomial.letter(1, A) * Polynomial.letter(2, B)
    assert p.relabel({1: 5, 2: 6}) == Polynomial.letter(5, A) * Polynomial.letter(6, B)


def test_is_alternating():
    assert is_alternating([1, 2, 1, 2])
    assert not is_alternating([1, 1, 2])
