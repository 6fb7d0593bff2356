"""Commutative polynomials in opaque marginal values such as ``<A C>``.

Symbolic evaluation of the laws returns :class:`Formal` objects, so identities
like ``<A C><B><D> + <A><B D><C> - <A><B><C><D>`` are checked exactly without
picking numbers.  Coefficients stay ints/Fractions unless a complex number is
mixed in.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Number

from .words import monomial_dagger, monomial_str


def _key_str(key) -> str:
    return f"<{monomial_str(key)}>"


def _key_order(key):
    return (len(key), tuple((s.name, s.adjoint) for s in key))


def _fmt_coeff(c) -> str:
    if isinstance(c, complex):
        if c.imag == 0:
            c = c.real
        else:
            return f"({c.real:g}{c.imag:+g}i)"
    if isinstance(c, float) and c.is_integer():
        c = int(c)
    return str(c)


class Formal:
    """Sparse polynomial: ``{((key, power), ...): coefficient}``.

    A key is a monomial (tuple of :class:`ObservableSymbol`) standing for the
    unknown expectation of that monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def symbol(cls, key) -> "Formal":
        if not key:
            return cls.constant(1)
        return cls({((tuple(key), 1),): 1})

    @classmethod
    def constant(cls, c) -> "Formal":
        return cls({(): c})

    @staticmethod
    def _lift(x) -> "Formal":
        if isinstance(x, Formal):
            return x
        if isinstance(x, Number):
            return Formal.constant(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Formal(out)

    __radd__ = __add__

    def __neg__(self):
        return Formal({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                powers = dict(m1)
                for k, p in m2:
                    powers[k] = powers.get(k, 0) + p
                mono = tuple(sorted(powers.items(), key=lambda kp: _key_order(kp[0])))
                out[mono] = out.get(mono, 0) + c1 * c2
        return Formal(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Formal.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        return Formal({m: c / other for m, c in self.terms.items()})

    def conjugate(self) -> "Formal":
        out = Formal.constant(0)
        for m, c in self.terms.items():
            term = Formal.constant(c.conjugate() if hasattr(c, "conjugate") else c)
            for key, p in m:
                term = term * Formal.symbol(monomial_dagger(key)) ** p
            out = out + term
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self):
        return self.terms.get((), 0)

    def substitute(self, values):
        """Evaluate with ``values(key)`` giving each marginal expectation."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for key, p in m:
                term = term * values(key) ** p
            total = total + term
        return total

    def __repr__(self):
        return f"Formal({self})"

    def __str__(self):
        if not self.terms:
            return "0"

        def order(item):
            m, _ = item
            return (sum(p for _, p in m), tuple((_key_order(k), p) for k, p in m))

        parts = []
        for m, c in sorted(self.terms.items(), key=order):
            body = "".join(_key_str(k) + (f"^{p}" if p > 1 else "") for k, p in m)
            if not body:
                parts.append(("-" if _is_negative(c) else "+", _fmt_coeff(abs(c) if _is_negative(c) else c)))
                continue
            if c == 1:
                parts.append(("+", body))
            elif c == -1:
                parts.append(("-", body))
            elif _is_negative(c):
                parts.append(("-", f"{_fmt_coeff(-c)}*{body}"))
            else:
                parts.append(("+", f"{_fmt_coeff(c)}*{body}"))
        sign, first = parts[0]
        text = ("-" if sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _is_negative(c) -> bool:
    if isinstance(c, complex):
        return c.imag == 0 and c.real < 0
    return c < 0


def exact(x):
    """Collapse Formal constants and integral Fractions to plain numbers."""
    if isinstance(x, Formal) and x.is_constant():
        x = x.constant_value()
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x
