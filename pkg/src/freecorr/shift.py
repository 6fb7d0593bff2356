"""Quantum shifts: words of self-adjoint involutions e(t) with bit-stream signs.

Swapping neighbours ``e(t) e(s)`` with ``t > s`` costs ``(-1)**a(t - s)``,
``e(t)**2 = 1``, and the state gives 0 to every reduced word except the
identity.  The free shift drops the swap relation altogether.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .bitstream import BitStream
from .words import ObservableSymbol, Polynomial, adjoint


@dataclass(frozen=True)
class TimedWord:
    times: tuple = ()

    def __init__(self, times: Sequence[int] = ()):
        object.__setattr__(self, "times", tuple(int(t) for t in times))

    def __len__(self):
        return len(self.times)

    def shifted(self, k: int) -> "TimedWord":
        return TimedWord(t + k for t in self.times)

    def __mul__(self, other: "TimedWord") -> "TimedWord":
        return TimedWord(self.times + other.times)

    def __pow__(self, k: int) -> "TimedWord":
        return TimedWord(self.times * k)

    def __str__(self):
        return " ".join(f"e({t})" for t in self.times) if self.times else "1"


@dataclass(frozen=True)
class SignedReducedWord:
    sign: int
    times: tuple

    @property
    def is_identity(self) -> bool:
        return not self.times


def _max_lag(times) -> int:
    return max(times) - min(times) if times else 0


def _as_times(w) -> tuple:
    return w.times if isinstance(w, TimedWord) else tuple(int(t) for t in w)


def reduce(w, stream: BitStream) -> SignedReducedWord:
    times = _as_times(w)
    sign, rest = kernels.reduce_word(times, stream.table(_max_lag(times)))
    return SignedReducedWord(sign, tuple(rest))


def expectation(w, stream: BitStream) -> int:
    times = _as_times(w)
    return kernels.word_sign(times, stream.table(_max_lag(times)))


def free_shift_expectation(letters) -> int:
    """1 if the word of free generators cancels completely, else 0.

    ``letters`` is a sequence of copy indices, or of ``(copy, generator)``
    pairs; only ``e_i e_i = 1`` simplifies.
    """
    stack = []
    for item in letters:
        key = item if not isinstance(item, tuple) else tuple(item)
        if stack and stack[-1] == key:
            stack.pop()
        else:
            stack.append(key)
    return 0 if stack else 1


# -- commutators through the word algebra ---------------------------------

def _gen(t: int) -> ObservableSymbol:
    return ObservableSymbol(f"e({t})")


def _symbol_time(sym: ObservableSymbol) -> int:
    # e(t) is self-adjoint, so the adjoint flag carries no information here
    return int(sym.name[2:-1])


def evaluate_single_copy(p: Polynomial, stream: BitStream):
    """Expectation of a polynomial whose letters are products of generators."""
    total = 0
    for word, coeff in p.items():
        times = [_symbol_time(s) for letter in word for s in letter.symbols]
        total += coeff * expectation(times, stream)
    return total


def commutator_norm_sq(t: int, s: int, stream: BitStream):
    """<[e(t), e(s)]^* [e(t), e(s)]>, expanded into four word expectations."""
    if t == s:
        raise ValueError("commutator_norm_sq needs t != s")
    c = commutator_word(t, s)
    return evaluate_single_copy(adjoint(c) * c, stream)


def commutator_word(t: int, s: int) -> Polynomial:
    """[e(t), e(s)] as a single-copy polynomial."""
    et = Polynomial.letter(1, _gen(t))
    es = Polynomial.letter(1, _gen(s))
    return et * es - es * et


# -- multi-time correlations over copy patterns ---------------------------

class ShiftCorrelation:
    """``times -> <w1(t_{c1}) w2(t_{c2}) ...>`` for a fixed copy pattern.

    ``copies[j]`` is the (canonical, 0-based) copy of slot ``j`` and
    ``payloads[j]`` the shift observable in that slot, as offsets of its
    generators (the bare generator ``e`` is ``(0,)``).  Calling the object
    evaluates one grid point; :meth:`grid_sum` sweeps a whole grid through
    the kernels.
    """

    def __init__(self, copies: Sequence[int], stream: BitStream, payloads=None, backend=None):
        self.copies = tuple(copies)
        self.payloads = tuple(tuple(p) for p in (payloads or [(0,)] * len(self.copies)))
        if len(self.payloads) != len(self.copies):
            raise ValueError("one payload per slot is required")
        self.stream = stream
        self.backend = backend
        self.gen_copy = [c for c, p in zip(self.copies, self.payloads) for _ in p]
        self.gen_offset = [o for p in self.payloads for o in p]

    def _spread(self) -> int:
        if not self.gen_offset:
            return 0
        return max(self.gen_offset) - min(self.gen_offset)

    def __call__(self, times: Sequence[int]) -> int:
        ts = [times[c] + o for c, o in zip(self.gen_copy, self.gen_offset)]
        return kernels.word_sign(ts, self.stream.table(_max_lag(ts)), self.backend)

    def grid_sum(self, horizons, min_gap=0, threads=None):
        bits = self.stream.table(max(horizons) + self._spread() + 1)
        return kernels.grid_sum(
            self.gen_copy, self.gen_offset, horizons, bits, min_gap, threads, self.backend
        )


class FreeShiftCorrelation:
    """Free-shift counterpart; time independent once copies get distinct times."""

    def __init__(self, copies: Sequence[int]):
        self.copies = tuple(copies)

    def __call__(self, times: Sequence[int]) -> int:
        # equal times for distinct copies make the letters coincide
        return free_shift_expectation([times[c] for c in self.copies])
