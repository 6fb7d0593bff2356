"""Copy-indexed words and polynomials of the asymptotic free algebra.

A :class:`Letter` is an ordered product of observable symbols living in one
copy of the single-system algebra.  A :class:`Word` is a sequence of letters
kept in normal form:

* identity symbols are dropped,
* consecutive letters with the same copy index are merged into one letter.

Those are the only simplifications; there are no relations between letters
of different copies.  :class:`Polynomial` holds scalar-weighted sums of words.
Coefficients may be ints, :class:`fractions.Fraction`, complex numbers or
:class:`freecorr.scalars.Formal` expressions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union


@dataclass(frozen=True, order=True)
class ObservableSymbol:
    name: str
    adjoint: bool = False
    is_identity: bool = False

    def __post_init__(self):
        if self.is_identity and self.adjoint:
            # the identity is self-adjoint; keep a single representation
            object.__setattr__(self, "adjoint", False)

    @classmethod
    def identity(cls) -> "ObservableSymbol":
        return cls("1", False, True)

    def dagger(self) -> "ObservableSymbol":
        if self.is_identity:
            return self
        return ObservableSymbol(self.name, not self.adjoint)

    def __str__(self):
        return self.name + ("*" if self.adjoint else "")


IDENTITY = ObservableSymbol.identity()

Monomial = tuple  # tuple[ObservableSymbol, ...], ordered product within one copy


def monomial_dagger(mono: Monomial) -> Monomial:
    return tuple(sym.dagger() for sym in reversed(mono))


def monomial_str(mono: Monomial) -> str:
    return " ".join(str(s) for s in mono) if mono else "1"


@dataclass(frozen=True)
class Letter:
    copy: int
    symbols: Monomial

    def __init__(self, copy: int, symbols: Union[ObservableSymbol, Iterable[ObservableSymbol]]):
        if not isinstance(copy, int) or copy < 1:
            raise ValueError(f"copy index must be a positive integer, got {copy!r}")
        if isinstance(symbols, ObservableSymbol):
            symbols = (symbols,)
        object.__setattr__(self, "copy", copy)
        object.__setattr__(self, "symbols", tuple(symbols))

    @property
    def is_identity(self) -> bool:
        return all(s.is_identity for s in self.symbols)

    def dagger(self) -> "Letter":
        return Letter(self.copy, monomial_dagger(self.symbols))

    def sort_key(self):
        return (self.copy, tuple((s.name, s.adjoint) for s in self.symbols))

    def __str__(self):
        if len(self.symbols) == 1:
            return f"{self.symbols[0]}_{self.copy}"
        return f"({monomial_str(self.symbols)})_{self.copy}"


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", tuple(letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def is_normal(self) -> bool:
        for i, letter in enumerate(self.letters):
            if not letter.symbols or any(s.is_identity for s in letter.symbols):
                return False
            if i and self.letters[i - 1].copy == letter.copy:
                return False
        return True

    @property
    def copies(self) -> tuple:
        return tuple(letter.copy for letter in self.letters)

    def sort_key(self):
        return (len(self.letters), tuple(l.sort_key() for l in self.letters))

    def __str__(self):
        return " ".join(str(l) for l in self.letters) if self.letters else "1"


def normalize(letters: Iterable[Letter]) -> Word:
    """Bring a letter sequence to normal form.

    Identity symbols are removed first; a letter left empty disappears, which
    may make its neighbours adjacent and therefore mergeable.
    """
    out: list[Letter] = []
    for letter in letters:
        syms = tuple(s for s in letter.symbols if not s.is_identity)
        if not syms:
            continue
        if out and out[-1].copy == letter.copy:
            out[-1] = Letter(letter.copy, out[-1].symbols + syms)
        else:
            out.append(Letter(letter.copy, syms))
    return Word(out)


def concat(u: Word, v: Word) -> Word:
    return normalize(u.letters + v.letters)


def _conj(c):
    conj = getattr(c, "conjugate", None)
    return conj() if conj is not None else c


def _is_zero(c) -> bool:
    return c == 0


class Polynomial:
    """Finite linear combination of normal-form words.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[Word, object], None] = None):
        clean = {}
        for w, c in (terms or {}).items():
            if not w.is_normal():
                w = normalize(w.letters)
            c = clean.get(w, 0) + c if w in clean else c
            clean[w] = c
        self._terms = {w: c for w, c in clean.items() if not _is_zero(c)}

    @classmethod
    def scalar(cls, c) -> "Polynomial":
        return cls({Word(): c})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls.scalar(1)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def from_word(cls, word: Union[Word, Sequence[Letter]], coeff=1) -> "Polynomial":
        if not isinstance(word, Word):
            word = Word(word)
        return cls({normalize(word.letters): coeff})

    @classmethod
    def letter(cls, copy: int, *symbols: ObservableSymbol) -> "Polynomial":
        return cls.from_word([Letter(copy, symbols)])

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def words(self):
        return [w for w, _ in self.items()]

    def coefficient(self, word: Word):
        return self._terms.get(word, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return self.is_zero()
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial({w: c * other for w, c in self._terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        return Polynomial({w: other * c for w, c in self._terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = Polynomial.one()
        for _ in range(k):
            out = out * self
        return out

    def dagger(self) -> "Polynomial":
        return adjoint(self)

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial({w: fn(c) for w, c in self._terms.items()})

    def relabel(self, mapping: Mapping[int, int]) -> "Polynomial":
        """Move letters to other copies; merges created by the move are applied."""
        out: dict = {}
        for w, c in self._terms.items():
            nw = normalize(Letter(mapping.get(l.copy, l.copy), l.symbols) for l in w)
            out[nw] = out[nw] + c if nw in out else c
        return Polynomial(out)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            if c == 1:
                parts.append(str(w))
            elif not w.letters:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*{w}")
        return " + ".join(parts)


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial.scalar(x)


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    out: dict = {}
    for u, a in p._terms.items():
        for v, b in q._terms.items():
            w = concat(u, v)
            c = a * b
            out[w] = out[w] + c if w in out else c
    return Polynomial(out)


def adjoint(p: Polynomial) -> Polynomial:
    out = {}
    for w, c in p._terms.items():
        out[Word(l.dagger() for l in reversed(w.letters))] = _conj(c)
    return Polynomial(out)


class CenteredSymbol:
    """``X - <X> 1`` for a single-copy symbol, instantiated at a copy on demand."""

    def __init__(self, symbol: ObservableSymbol, mean):
        self.symbol = symbol
        self.mean = mean

    def at(self, copy: int) -> Polynomial:
        if self.symbol.is_identity:
            return Polynomial.scalar(1 - self.mean)
        return Polynomial.letter(copy, self.symbol) - Polynomial.scalar(self.mean)

    def __repr__(self):
        return f"CenteredSymbol({self.symbol}, mean={self.mean!r})"


def center(symbol: ObservableSymbol, state) -> CenteredSymbol:
    """Subtract the state's mean from ``symbol``.

    ``state`` is anything callable on a monomial (tuple of symbols), e.g. a
    :class:`freecorr.laws.MarginalState`.  A missing moment propagates the
    state's own error.
    """
    mean = 1 if symbol.is_identity else state((symbol,))
    return CenteredSymbol(symbol, mean)


def is_alternating(copies: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(copies, copies[1:]))
