"""Closed-form asymptotic expectations under three independence structures.

* tensor: letters are grouped by copy (order kept inside a copy) and each
  group is evaluated by the single-system state;
* free: centered alternating words vanish; other words are reduced to
  shorter ones by writing every letter as ``<X> 1 + (X - <X> 1)``;
* koopman: each letter, merged or not, is evaluated on its own.

All three act on :class:`Word` and extend linearly to :class:`Polynomial`.
Marginal values can be numbers or opaque :class:`Formal` symbols.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping

from .scalars import Formal, exact
from .words import (
    Letter,
    Word,
    monomial_dagger,
    monomial_str,
    normalize,
)


class MissingMomentError(KeyError):
    def __init__(self, monomial):
        self.monomial = tuple(monomial)
        super().__init__(f"no marginal moment for <{monomial_str(self.monomial)}>")

    def __str__(self):
        return self.args[0]


class MarginalState:
    """Single-system expectations of ordered symbol monomials.

    ``table`` maps monomials (tuples of :class:`ObservableSymbol`) to values.
    In symbolic mode every monomial evaluates to the formal symbol
    ``<monomial>``.  ``fallback`` may compute values the table lacks.
    """

    def __init__(self, table: Mapping | None = None, symbolic: bool = False,
                 fallback: Callable | None = None):
        self.table = {tuple(k): v for k, v in (table or {}).items()}
        self.symbolic = symbolic
        self.fallback = fallback

    @classmethod
    def symbolic_state(cls) -> "MarginalState":
        return cls(symbolic=True)

    def __call__(self, monomial):
        monomial = tuple(s for s in monomial if not s.is_identity)
        if not monomial:
            return 1
        if monomial in self.table:
            return self.table[monomial]
        if self.symbolic:
            return Formal.symbol(monomial)
        if self.fallback is not None:
            value = self.fallback(monomial)
            if value is not None:
                return value
        raise MissingMomentError(monomial)

    def check_positivity(self, tol: float = 1e-12) -> list:
        """Monomials M with <M* M> in the table and not >= 0; empty when fine."""
        bad = []
        for mono in list(self.table):
            key = monomial_dagger(mono) + mono
            if key in self.table:
                v = self.table[key]
                v = complex(v)
                if abs(v.imag) > tol or v.real < -tol:
                    bad.append(mono)
        return bad


def _letter_value(letter: Letter, state):
    return state(letter.symbols)


def _product(values):
    out = 1
    for v in values:
        out = out * v
    return out


def tensor_moment(w: Word, state) -> object:
    groups: dict = {}
    for letter in w:
        groups.setdefault(letter.copy, []).extend(letter.symbols)
    return exact(_product(state(tuple(syms)) for syms in groups.values()))


def koopman_moment(w: Word, state) -> object:
    return exact(_product(_letter_value(l, state) for l in w))


def free_moment(w: Word, state, memo: dict | None = None) -> object:
    """Free-product expectation of a normal-form word.

    With ``X_i = m_i 1 + Xc_i`` the word expands over the subsets S of
    positions kept centered.  S = everything is a centered alternating word
    and contributes 0.  For the remaining S the centered letters are expanded
    back (``Xc = X - m``) into words strictly shorter than ``w``; those are
    evaluated recursively.  ``memo`` may be shared between calls that use
    the same state.
    """
    if memo is None:
        memo = {}

    def value(word: Word):
        if word in memo:
            return memo[word]
        n = len(word)
        if n == 0:
            result = 1
        elif n == 1:
            result = _letter_value(word.letters[0], state)
        else:
            means = [_letter_value(l, state) for l in word]
            # label 0: outside S (factor m), 1: in S but not U (factor -m),
            # 2: letter kept; zero means only allow label 2
            options = [(2,) if m == 0 else (0, 1, 2) for m in means]
            result = 0
            for labels in itertools.product(*options):
                if 0 not in labels:
                    continue  # S = all positions: alternating centered word
                coeff = 1
                kept = []
                for lab, m, letter in zip(labels, means, word):
                    if lab == 0:
                        coeff = coeff * m
                    elif lab == 1:
                        coeff = coeff * (-m)
                    else:
                        kept.append(letter)
                result = result + coeff * value(normalize(kept))
        memo[word] = result
        return result

    if not w.is_normal():
        w = normalize(w.letters)
    return exact(value(w))


LAWS = {"tensor": tensor_moment, "free": free_moment, "koopman": koopman_moment}


def evaluate(p, law, state):
    """Linear extension of a word law to polynomials (or single words)."""
    fn = LAWS[law] if isinstance(law, str) else law
    if isinstance(p, Word):
        return fn(p, state)
    total = 0
    for word, coeff in p.items():
        if isinstance(coeff, Formal) or not _is_zero(coeff):
            total = total + coeff * fn(word, state)
    return exact(total)


def _is_zero(c):
    return c == 0


# -- free cumulants --------------------------------------------------------

def free_cumulants(moments):
    """Free cumulants k_1..k_n from moments m_1..m_n (n <= 16).

    Uses the first-block decomposition of non-crossing partitions: the block
    containing 1 has size s and its s gaps hold arbitrary non-crossing
    partitions, so ``m_n = sum_s k_s * [z^(n-s)] M(z)^s`` with
    ``M(z) = 1 + m_1 z + m_2 z^2 + ...``.
    """
    m = [1] + list(moments)
    n = len(moments)
    if n > 16:
        raise ValueError("at most 16 moments are supported")
    # powers[s][j] = [z^j] M(z)^s
    powers = [[1] + [0] * n]
    for s in range(1, n + 1):
        prev = powers[-1]
        powers.append([sum(prev[i] * m[j - i] for i in range(j + 1)) for j in range(n + 1)])
    kappa = [0] * (n + 1)
    for k in range(1, n + 1):
        acc = m[k]
        for s in range(1, k):
            acc = acc - kappa[s] * powers[s][k - s]
        kappa[k] = acc
    return [exact(k) for k in kappa[1:]]


def moments_from_free_cumulants(kappa):
    n = len(kappa)
    k = [0] + list(kappa)
    m = [1] + [0] * n
    for N in range(1, n + 1):
        # m_N = sum_s k_s [z^(N-s)] M(z)^s, using moments below N only
        total = 0
        for s in range(1, N + 1):
            total = total + k[s] * _power_coeff(m, s, N - s)
        m[N] = total
    return [exact(x) for x in m[1:]]


def _power_coeff(m, s, j):
    # [z^j] (sum_i m_i z^i)^s over already known m_0..m_j
    poly = [1] + [0] * j
    base = m[: j + 1]
    for _ in range(s):
        poly = [sum(poly[i] * base[jj - i] for i in range(jj + 1)) for jj in range(j + 1)]
    return poly[j]


# -- marginal state parsing -------------------------------------------------

def parse_value(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j")) if "i" in text and "j" not in text else complex(text)
    except ValueError as exc:
        raise ValueError(f"cannot parse marginal value {text!r}") from exc
