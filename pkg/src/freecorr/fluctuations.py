"""Moments of normalized fluctuation sums ``S_N = N**-0.5 * sum_j X_j``.

``X_j`` is a centered observable placed in copy ``j``.  The m-th moment is a
sum over index tuples ``(i_1..i_m)``; tuples with the same kernel partition
give the same word expectation, and a partition with ``k`` blocks is hit by
``N (N-1) ... (N-k+1)`` tuples.  A *model* supplies the expectation of the
word attached to a partition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import cesaro, laws, shift
from .bitstream import BitStream
from .partitions import catalan, double_factorial, falling_factorial, set_partitions
from .scalars import exact
from .words import Letter, ObservableSymbol, Word, normalize

GENERATOR = ObservableSymbol("X")


class FluctuationError(ValueError):
    pass


def canonical(copies) -> tuple:
    seen: dict = {}
    return tuple(seen.setdefault(c, len(seen)) for c in copies)


def sign_moments(K: int) -> dict:
    """Moments of a centered +-1 variable (``e`` with ``e**2 = 1``)."""
    return {k: (1 if k % 2 == 0 else 0) for k in range(1, K + 1)}


def generator_state(moments: dict) -> laws.MarginalState:
    """State on powers of the generator symbol ``X``: ``<X^k> = moments[k]``."""

    def lookup(mono):
        if all(s == GENERATOR for s in mono) and len(mono) in moments:
            return moments[len(mono)]
        return None

    return laws.MarginalState(fallback=lookup)


class LawModel:
    """Word expectations of a centered generator under tensor/free/koopman."""

    vanishing = "singleton"

    def __init__(self, law: str, moments: dict | None = None, max_moment: int = 12):
        if law not in laws.LAWS:
            raise FluctuationError(f"unknown law {law!r}")
        self.law = law
        self.moments = dict(moments) if moments is not None else sign_moments(max_moment)
        if self.moments.get(1, 0) != 0:
            raise FluctuationError("the generator must be centered: <X> = 0")
        self.state = generator_state(self.moments)
        self._cache: dict = {}
        self._memo: dict = {}

    @property
    def variance(self):
        return self.moments.get(2, 0)

    def word(self, copies) -> Word:
        return normalize(Letter(c + 1, GENERATOR) for c in copies)

    def expect(self, copies):
        key = canonical(copies)
        if key not in self._cache:
            w = self.word(key)
            if self.law == "free":
                self._cache[key] = laws.free_moment(w, self.state, self._memo)
            else:
                self._cache[key] = laws.LAWS[self.law](w, self.state)
        return self._cache[key]

    def label(self) -> str:
        return self.law


class FreeShiftModel:
    """The free shift: only ``e_i e_i = 1`` simplifies."""

    vanishing = "odd"
    variance = 1

    def expect(self, copies):
        return shift.free_shift_expectation(copies)

    def label(self) -> str:
        return "shift:free"


class ShiftModel:
    """Bit-stream shift; each pattern is time averaged by the Cesàro engine."""

    vanishing = "odd"
    variance = 1

    def __init__(self, stream: BitStream, horizon: int, min_gap: int = 0, threads=None):
        self.stream = stream
        self.horizon = int(horizon)
        self.min_gap = min_gap
        self.threads = threads
        self._cache: dict = {}

    def expect(self, copies):
        key = canonical(copies)
        if key not in self._cache:
            pattern = cesaro.TimePattern.from_copies(key)
            ev = shift.ShiftCorrelation(pattern.copies, self.stream)
            sched = cesaro.AveragingSchedule.equal(pattern.distinct, self.horizon)
            if self.min_gap:
                val = cesaro.diagonal_skip_average(pattern, ev, sched, self.min_gap, self.threads)
            else:
                val = cesaro.average(pattern, ev, sched, self.threads)
            self._cache[key] = val
        return self._cache[key]

    def label(self) -> str:
        return f"shift:{self.stream.spec()}"


def _normalizer(N: int, m: int):
    # N**(m/2); exact when m is even
    if m % 2 == 0:
        return N ** (m // 2)
    return float(N) ** (m / 2)


def _weighted(total, norm):
    if isinstance(total, int) and total == 0:
        return 0
    if isinstance(norm, int):
        if isinstance(total, (int, Fraction)):
            return exact(Fraction(total) / norm)
        return total / norm
    return total / norm


def sum_moment(model, N: int, m: int, mode: str = "combinatorial"):
    """``<(N**-0.5 sum_j X_j)**m>`` for ``model``.

    ``combinatorial`` sums over set partitions of the m positions weighted by
    falling factorials (N <= 10**6); ``brute`` enumerates all ``N**m`` index
    tuples (N <= 50).  Results are exact Fractions when m is even and the
    model's values are rational.
    """
    if isinstance(model, str):
        model = LawModel(model)
    if not 1 <= m <= 12:
        raise FluctuationError(f"moment order must lie in 1..12, got {m}")
    if N < 1:
        raise FluctuationError("N must be >= 1")
    norm = _normalizer(N, m)
    total = 0
    if mode == "combinatorial":
        if N > 10**6:
            raise FluctuationError("combinatorial mode supports N <= 10**6")
        vanishing = getattr(model, "vanishing", None)
        parts = set_partitions(
            m,
            min_block=2 if vanishing in ("singleton", "odd") else 1,
            even_blocks=vanishing == "odd",
        )
        for rgs in parts:
            k = max(rgs) + 1
            if k > N:
                continue
            value = model.expect(rgs)
            if value != 0:
                total = total + falling_factorial(N, k) * value
    elif mode == "brute":
        if N > 50:
            raise FluctuationError("brute-force mode supports N <= 50")
        for idx in itertools.product(range(N), repeat=m):
            total = total + model.expect(idx)
    else:
        raise FluctuationError(f"unknown mode {mode!r}")
    return _weighted(total, norm)


def shift_fluctuation_moments(stream, N: int, m: int, schedule, min_gap: int = 0, threads=None):
    """m-th fluctuation moment in the time-averaged algebra of a shift.

    ``stream`` is a :class:`BitStream` or ``"free"`` for the free shift;
    ``schedule`` is an equal horizon (int) or an :class:`AveragingSchedule`
    whose first horizon is used for every pattern.
    """
    if N > 50 or m > 8:
        raise FluctuationError("shift fluctuations support N <= 50 and m <= 8")
    if isinstance(stream, str) and stream == "free":
        model = FreeShiftModel()
    else:
        T = schedule.horizons[0] if isinstance(schedule, cesaro.AveragingSchedule) else int(schedule)
        model = ShiftModel(stream, T, min_gap, threads)
    return sum_moment(model, N, m)


# -- reference laws and classification -------------------------------------

@dataclass(frozen=True)
class MomentSequence:
    values: tuple  # m_1 .. m_K
    label: str | None = None

    def moment(self, k: int):
        if k == 0:
            return 1
        return self.values[k - 1]

    def __len__(self):
        return len(self.values)

    def hankel_positive(self, tol: float = 1e-9) -> bool:
        """Positive semidefiniteness of the Hankel matrix of available moments."""
        n = len(self.values) // 2
        if n == 0:
            return True
        H = np.array([[float(self.moment(i + j)) for j in range(n + 1)] for i in range(n + 1)])
        return bool(np.linalg.eigvalsh(H).min() >= -tol * max(1.0, abs(H).max()))


def gaussian_moments(K: int, variance=1) -> MomentSequence:
    if K > 16:
        raise FluctuationError("K <= 16")
    vals = [0 if k % 2 else double_factorial(k - 1) * variance ** (k // 2) for k in range(1, K + 1)]
    return MomentSequence(tuple(exact(v) for v in vals), "gaussian")


def semicircle_moments(K: int, variance=1) -> MomentSequence:
    if K > 16:
        raise FluctuationError("K <= 16")
    vals = [0 if k % 2 else catalan(k // 2) * variance ** (k // 2) for k in range(1, K + 1)]
    return MomentSequence(tuple(exact(v) for v in vals), "semicircle")


class Classification(NamedTuple):
    label: str
    distance: float
    gaussian_distance: float
    semicircle_distance: float


def classify(seq, threshold: float = 0.05) -> Classification:
    """Nearest of gaussian/semicircle by max relative deviation of even moments.

    The sequence is rescaled to unit variance; m_4 and m_6 at least are
    required.
    """
    values = seq.values if isinstance(seq, MomentSequence) else tuple(seq)
    if len(values) < 6:
        raise FluctuationError("classification needs moments up to order 6")
    m2 = float(values[1])
    if m2 <= 0:
        raise FluctuationError("m_2 must be positive")
    dist = {}
    for name in ("gaussian", "semicircle"):
        worst = 0.0
        for k in range(4, len(values) + 1, 2):
            r = float(values[k - 1]) / m2 ** (k // 2)
            target = double_factorial(k - 1) if name == "gaussian" else catalan(k // 2)
            worst = max(worst, abs(r - target) / target)
        dist[name] = worst
    best = min(dist, key=dist.get)
    label = best if dist[best] < threshold else "other"
    return Classification(label, dist[best], dist["gaussian"], dist["semicircle"])


def moment_sequence(model, N: int, K: int) -> MomentSequence:
    return MomentSequence(tuple(sum_moment(model, N, k) for k in range(1, K + 1)))
