import pytest

from freecorr.laws import MarginalState
from freecorr.parsing import (
    ParseError,
    parse_normal_word,
    parse_pattern,
    parse_timed_word,
    parse_word,
    word_polynomial,
)
from freecorr.words import Letter, ObservableSymbol, Polynomial, Word

A, B, C = (ObservableSymbol(n) for n in "ABC")


def test_letters_and_merging():
    assert parse_normal_word("A_1 C_1 B_2") == Word([Letter(1, (A, C)), Letter(2, B)])
    assert parse_normal_word("(A C)_1 B_2") == parse_normal_word("A_1 C_1 B_2")


@pytest.mark.parametrize("text", ["A*_1", "A^*_1", "A†_1"])
def test_adjoint_spellings(text):
    assert parse_normal_word(text) == Word([Letter(1, A.dagger())])


def test_groups_and_identity():
    assert parse_normal_word("(A_1 B_2)^2") == parse_normal_word("A_1 B_2 A_1 B_2")
    assert parse_normal_word("A_1 1_2 C_1") == Word([Letter(1, (A, C))])
    assert parse_normal_word("(A_1)^0") == Word()


def test_centered_letters():
    items = parse_word("~A_1 B_2")
    assert items[0].centered and not items[1].centered
    state = MarginalState({(A,): 2, (B,): 5})
    p = word_polynomial(items, state)
    assert p == (Polynomial.letter(1, A) - Polynomial.scalar(2)) * Polynomial.letter(2, B)
    with pytest.raises(ValueError):
        word_polynomial("~A_1")


def test_timed_words():
    assert parse_timed_word("e(3) e(7) e(3)").times == (3, 7, 3)
    assert parse_timed_word("(e(1) e(2))^4").times == (1, 2) * 4
    assert parse_timed_word("1").times == ()
    assert parse_timed_word("").times == ()


@pytest.mark.parametrize("text,copies", [("e_1 e_2 e_1 e_2", [1, 2, 1, 2]), ("1212", [1, 2, 1, 2]),
                                         ("1, 2, 1", [1, 2, 1]), ("(e_1 e_2)^2", [1, 2, 1, 2])])
def test_patterns(text, copies):
    assert parse_pattern(text) == copies


@pytest.mark.parametrize("text,pos", [("A_1 B", 5), ("A_0", 0), ("A_1 (B_2", 8), ("A_1 $", 4),
                                      ("~(A_1 B_2)^2", 0), ("A_x", 2)])
def test_word_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_word(text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


@pytest.mark.parametrize("text", ["e(1) e(x)", "e(1", "f(2)", "(e(1) e(2)"])
def test_timed_errors(text):
    with pytest.raises(ParseError):
        parse_timed_word(text)


def test_pattern_errors():
    with pytest.raises(ParseError):
        parse_pattern("1012")
    with pytest.raises(ParseError, match="generator 'e'"):
        parse_pattern("e_1 f_2")
