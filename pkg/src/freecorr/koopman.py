"""Finite-rank operators over the doubling map x -> 2x mod 1.

Wave functions are trigonometric polynomials ``f(x) = sum_k c_k exp(2 pi i k x)``
stored as sparse mode maps.  Composition with the map sends mode ``k`` to
``2k``, so ``f_t`` has modes ``k 2**t``; Python ints keep those exact for any
``t``.  Lebesgue measure is invariant, and ``<f|g> = sum conj(c_k(f)) c_k(g)``.

Operators are sums of ``|f><g|`` plus an explicit multiple of the identity,
which is not finite rank but is needed to center observables.  They are never
stored as matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import cesaro, laws
from .words import ObservableSymbol, Polynomial


@dataclass(frozen=True)
class FourierObservable:
    modes: tuple = ()  # sorted ((k, coefficient), ...), zero coefficients dropped

    def __init__(self, coefficients=None):
        items = dict(coefficients or {})
        object.__setattr__(
            self, "modes", tuple(sorted((int(k), complex(c)) for k, c in items.items() if c != 0))
        )

    @classmethod
    def constant(cls, c=1.0) -> "FourierObservable":
        return cls({0: c})

    def coefficient(self, k: int) -> complex:
        for kk, c in self.modes:
            if kk == k:
                return c
        return 0j

    @property
    def mean(self) -> complex:
        return self.coefficient(0)

    def as_dict(self) -> dict:
        return dict(self.modes)

    def max_mode(self) -> int:
        return max((abs(k) for k, _ in self.modes), default=0)

    def min_nonzero_mode(self) -> int:
        return min((abs(k) for k, _ in self.modes if k), default=0)

    def evolve(self, t: int) -> "FourierObservable":
        return evolve(self, t)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for k, c in self.modes:
            out += c * np.exp(2j * np.pi * k * x)
        return out


@lru_cache(maxsize=65536)
def evolve(f: FourierObservable, t: int) -> FourierObservable:
    if t < 0:
        raise ValueError("the doubling map is evolved forward only (t >= 0)")
    if t == 0:
        return f
    scale = 1 << t
    obj = FourierObservable.__new__(FourierObservable)
    object.__setattr__(obj, "modes", tuple((k * scale, c) for k, c in f.modes))
    return obj


def inner(f: FourierObservable, g: FourierObservable) -> complex:
    """<f|g>, antilinear in ``f``."""
    gd = g.as_dict()
    return sum((c.conjugate() * gd[k] for k, c in f.modes if k in gd), 0j)


@dataclass(frozen=True)
class RankOneOperator:
    ket: FourierObservable
    bra: FourierObservable

    def mean(self) -> complex:
        return self.ket.mean * self.bra.mean.conjugate()

    def dagger(self) -> "RankOneOperator":
        return RankOneOperator(self.bra, self.ket)


def R(f: FourierObservable) -> RankOneOperator:
    return RankOneOperator(f, f)


@dataclass(frozen=True)
class FiniteRankOperator:
    """``identity * 1 + sum(c * |f><g|)``."""

    terms: tuple = ()  # ((scalar, RankOneOperator), ...)
    identity: complex = 0j

    @classmethod
    def of(cls, *ops, identity=0j) -> "FiniteRankOperator":
        terms = []
        for op in ops:
            if isinstance(op, RankOneOperator):
                terms.append((1 + 0j, op))
            else:
                c, r = op
                terms.append((complex(c), r))
        return cls(tuple(terms), complex(identity))

    def mean(self) -> complex:
        return self.identity + sum((c * r.mean() for c, r in self.terms), 0j)

    def dagger(self) -> "FiniteRankOperator":
        return FiniteRankOperator(
            tuple((c.conjugate(), r.dagger()) for c, r in self.terms), self.identity.conjugate()
        )

    def centered(self) -> "FiniteRankOperator":
        return FiniteRankOperator(self.terms, self.identity - self.mean())

    def finite_part(self) -> "FiniteRankOperator":
        return FiniteRankOperator(self.terms, 0j)

    def max_mode(self) -> int:
        return max((max(r.ket.max_mode(), r.bra.max_mode()) for _, r in self.terms), default=0)


def _as_operator(op) -> FiniteRankOperator:
    if isinstance(op, RankOneOperator):
        return FiniteRankOperator.of(op)
    return op


def multi_correlation(ops: Sequence) -> complex:
    """``<1| X1(t1) X2(t2) ... Xn(tn) |1>`` for ``ops = [(X, t), ...]``.

    A row functional starting at ``<1|`` is pushed through the operators from
    the left: ``<r| |f><g| = <r|f> <g|``.
    """
    row = {0: 1 + 0j}  # <r|h> = sum row[k] * h_k
    for op, t in ops:
        op = _as_operator(op)
        new = {k: op.identity * v for k, v in row.items()} if op.identity else {}
        for c, r in op.terms:
            ket = evolve(r.ket, t)
            amp = c * sum((row[k] * v for k, v in ket.modes if k in row), 0j)
            if amp == 0:
                continue
            for k, v in evolve(r.bra, t).modes:
                new[k] = new.get(k, 0j) + amp * v.conjugate()
        row = new
        if not row:
            return 0j
    return row.get(0, 0j)


def mixing_gap(ops: Iterable) -> int:
    """Smallest lag d >= 1 with ``2**d`` above every mode in ``ops``.

    Two functions whose evolution times differ by at least this much have
    ``<f_s|g_t> = conj(<f>) <g>`` exactly.
    """
    K = max((_as_operator(op).max_mode() for op in ops), default=0)
    d = 1
    while (1 << d) <= K:
        d += 1
    return d


def exactly_mixed(f: FourierObservable, g: FourierObservable, t: int) -> bool:
    """True when ``2**t`` exceeds max mode of f over min nonzero mode of g."""
    lo = g.min_nonzero_mode()
    if lo == 0:
        return True
    return (1 << t) * lo > f.max_mode()


class OperatorState(laws.MarginalState):
    """Marginal state induced by named operators through ``<1| ... |1>``."""

    def __init__(self, operators: dict):
        self.operators = dict(operators)
        super().__init__(fallback=self._chain)

    def _chain(self, monomial):
        ops = []
        for sym in monomial:
            if sym.name not in self.operators:
                return None
            op = _as_operator(self.operators[sym.name])
            ops.append((op.dagger() if sym.adjoint else op, 0))
        return multi_correlation(ops)


@dataclass
class CheckResult:
    estimate: complex
    prediction: complex
    error: float
    full_average: complex = field(default=0j)
    min_gap: int = 0


def _prediction(copies, ops, names):
    """koopman law on prod_j (lambda_j 1 + F_j) with F_j the finite-rank parts."""
    pattern = cesaro.TimePattern.from_copies(copies)
    poly = Polynomial.one()
    table = {}
    for c, op, name in zip(pattern.copies, ops, names):
        op = _as_operator(op)
        table[name] = op.finite_part()
        poly = poly * (Polynomial.scalar(op.identity) + Polynomial.letter(c + 1, ObservableSymbol(name)))
    state = OperatorState(table)
    return laws.evaluate(poly, "koopman", state)


def _names(ops):
    seen: dict = {}
    names = []
    for op in ops:
        key = id(op)
        if key not in seen:
            seen[key] = f"X{len(seen) + 1}"
        names.append(seen[key])
    return names


def correlation_evaluator(copies, ops):
    pattern = cesaro.TimePattern.from_copies(copies)
    ops = [_as_operator(op) for op in ops]
    slots = pattern.copies

    def evaluator(times):
        return multi_correlation([(op, times[c]) for op, c in zip(ops, slots)])

    return pattern, evaluator


def asymptotic_check(copies: Sequence, ops: Sequence, schedule, min_gap: int | None = None,
                     threads=None) -> CheckResult:
    """Time-averaged correlation vs the koopman-law prediction.

    Grid points where two copies are closer than ``min_gap`` are dropped
    (distinct copies stand for distinct times); by default the gap is
    :func:`mixing_gap`, beyond which every factor has already decorrelated.
    """
    if len(copies) != len(ops):
        raise ValueError("one operator per slot is required")
    pattern, evaluator = correlation_evaluator(copies, ops)
    if min_gap is None:
        min_gap = mixing_gap(ops) if pattern.distinct > 1 else 0
    estimate = cesaro.diagonal_skip_average(pattern, evaluator, schedule, min_gap, threads)
    full = cesaro.average(pattern, evaluator, schedule, threads)
    prediction = _prediction(copies, ops, _names(ops))
    return CheckResult(complex(estimate), complex(prediction), abs(complex(estimate) - complex(prediction)),
                       complex(full), min_gap)


def random_observable(rng: np.random.Generator, max_mode: int = 2, mean_scale: float = 1.0) -> FourierObservable:
    coeffs = {}
    for k in range(-max_mode, max_mode + 1):
        coeffs[k] = complex(rng.normal(), rng.normal()) / (1 + abs(k))
    coeffs[0] = complex(rng.normal(), rng.normal()) * mean_scale + 0.5
    return FourierObservable(coeffs)


def random_rank_one(rng: np.random.Generator, max_mode: int = 2) -> RankOneOperator:
    return RankOneOperator(random_observable(rng, max_mode), random_observable(rng, max_mode))


# -- observable files ------------------------------------------------------

class ObservableFileError(ValueError):
    pass


def _parse_complex(text: str, where: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ObservableFileError(f"{where}: expected 're,im', got {text!r}")


def parse_observable_file(path) -> tuple:
    """Read an operator file; returns ``(operator, center_flag)``.

    Lines::

        ket                # starts a rank-one term |f><g|
        mode 1 = 0.5,0.1   # coefficient of exp(2 pi i k x) in the current function
        bra                # switch to the bra of the current term
        scale = 1,0        # multiplies the current term
        identity = 0.2,0   # identity component
        center             # subtract the mean times the identity

    Mode lines before any ``ket`` define a single function ``f`` and the file
    means ``R(f) = |f><f|``.  A term without ``bra`` uses its ket as bra.
    """
    where = str(path)
    terms = []
    current = None  # [ket dict, bra dict or None, scale]
    side = None
    identity = 0j
    center = False
    loose: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        loc = f"{where}:{lineno}"
        if not line:
            continue
        word = line.split()[0].lower()
        if word == "ket":
            current = [{}, None, 1 + 0j]
            terms.append(current)
            side = "ket"
        elif word == "bra":
            if current is None:
                raise ObservableFileError(f"{loc}: 'bra' before any 'ket'")
            current[1] = {}
            side = "bra"
        elif word == "center":
            center = True
        elif word == "mode":
            lhs, _, rhs = line.partition("=")
            try:
                k = int(lhs.split()[1])
            except (IndexError, ValueError):
                raise ObservableFileError(f"{loc}: expected 'mode k = re,im'") from None
            target = loose if current is None else (current[0] if side == "ket" else current[1])
            target[k] = target.get(k, 0j) + _parse_complex(rhs.strip(), loc)
        elif word in ("identity", "scale"):
            _, _, rhs = line.partition("=")
            value = _parse_complex(rhs.strip(), loc)
            if word == "identity":
                identity = value
            else:
                if current is None:
                    raise ObservableFileError(f"{loc}: 'scale' outside a term")
                current[2] = value
        else:
            raise ObservableFileError(f"{loc}: unknown directive {word!r}")
    ops = []
    if loose:
        if terms:
            raise ObservableFileError(f"{where}: mode lines outside a term mixed with ket/bra terms")
        f = FourierObservable(loose)
        ops.append((1 + 0j, R(f)))
    for ket, bra, scale in terms:
        f = FourierObservable(ket)
        g = FourierObservable(bra) if bra is not None else f
        ops.append((scale, RankOneOperator(f, g)))
    if not ops and identity == 0:
        raise ObservableFileError(f"{where}: no operator defined")
    op = FiniteRankOperator(tuple(ops), identity)
    return op, center


def format_observable_file(op: FiniteRankOperator, center: bool = False) -> str:
    lines = []
    for c, r in op.terms:
        lines.append("ket")
        for k, v in r.ket.modes:
            lines.append(f"mode {k} = {v.real!r},{v.imag!r}")
        lines.append("bra")
        for k, v in r.bra.modes:
            lines.append(f"mode {k} = {v.real!r},{v.imag!r}")
        if c != 1:
            lines.append(f"scale = {c.real!r},{c.imag!r}")
    if op.identity:
        lines.append(f"identity = {op.identity.real!r},{op.identity.imag!r}")
    if center:
        lines.append("center")
    return "\n".join(lines) + "\n"
