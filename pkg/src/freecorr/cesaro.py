"""Iterated time averages of multi-time correlation functions.

A :class:`TimePattern` assigns each slot of a product to a copy; every copy
gets one time and all slots of that copy share it.  :func:`average` sums an
evaluator over the box ``[0, T_1] x ... x [0, T_s]`` and divides by the
number of points.

Evaluators are plain callables ``times -> scalar`` where ``times[c]`` is the
time of canonical copy ``c`` (0-based, by first appearance).  An evaluator
exposing ``grid_sum(horizons, min_gap, threads)`` (the shift correlations)
is summed by the kernels instead of point by point.

Work is split into fixed chunks whose partial sums are combined in index
order, so results do not depend on the number of threads.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .kernels import max_threads

ROW_CHUNK = 16


class AveragingError(ValueError):
    pass


@dataclass(frozen=True)
class TimePattern:
    """Slot copies relabelled to 0..s-1 by first appearance, plus payloads."""

    copies: tuple
    payloads: tuple = ()
    labels: tuple = ()

    @classmethod
    def from_copies(cls, copies: Sequence, payloads: Sequence = ()) -> "TimePattern":
        relabel: dict = {}
        canon = []
        for c in copies:
            if c not in relabel:
                relabel[c] = len(relabel)
            canon.append(relabel[c])
        payloads = tuple(payloads) if payloads else tuple(None for _ in canon)
        if len(payloads) != len(canon):
            raise ValueError("one payload per slot is required")
        return cls(tuple(canon), payloads, tuple(relabel))

    @classmethod
    def from_word(cls, word) -> "TimePattern":
        """Pattern of a :class:`freecorr.words.Word`; payloads are the letters' symbols."""
        return cls.from_copies([l.copy for l in word], [l.symbols for l in word])

    @property
    def distinct(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.copies)


@dataclass(frozen=True)
class AveragingSchedule:
    horizons: tuple
    ladder: tuple = field(default=())

    def __post_init__(self):
        for T in self.horizons:
            if int(T) < 1:
                raise AveragingError(f"horizons must be >= 1, got {self.horizons}")

    @classmethod
    def equal(cls, s: int, T: int) -> "AveragingSchedule":
        return cls(tuple([int(T)] * s))

    @classmethod
    def staircase(cls, s: int, T1: int, power: int = 2) -> "AveragingSchedule":
        """``T_{k+1} = T_k ** power``: inner averages run far longer than outer ones
        are allowed to grow, imitating the iterated limits."""
        hs = [int(T1)]
        for _ in range(s - 1):
            hs.append(hs[-1] ** power)
        return cls(tuple(reversed(hs)))


def _points(horizons) -> int:
    return math.prod(T + 1 for T in horizons)


def _gaps_ok(times, min_gap) -> bool:
    for i in range(len(times)):
        for j in range(i + 1, len(times)):
            if abs(times[i] - times[j]) < min_gap:
                return False
    return True


def _grid_sum(evaluator: Callable, horizons, min_gap: int, threads):
    T0 = horizons[0]
    rest = [range(T + 1) for T in horizons[1:]]
    starts = list(range(0, T0 + 1, ROW_CHUNK))

    def run(lo):
        total = 0
        count = 0
        for t0 in range(lo, min(lo + ROW_CHUNK, T0 + 1)):
            for tail in itertools.product(*rest):
                times = (t0,) + tail
                if min_gap and not _gaps_ok(times, min_gap):
                    continue
                total = total + evaluator(times)
                count += 1
        return total, count

    workers = min(threads or max_threads(), len(starts))
    if workers <= 1:
        parts = [run(lo) for lo in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    total = 0
    count = 0
    for t, c in parts:
        total = total + t
        count += c
    return total, count


def _divide(total, count):
    if isinstance(total, int):
        q = Fraction(total, count)
        return int(q) if q.denominator == 1 else float(q)
    if isinstance(total, Fraction):
        q = total / count
        return int(q) if q.denominator == 1 else float(q)
    return total / count


def summed(pattern: TimePattern, evaluator, horizons, min_gap: int = 0, threads=None):
    """``(sum, points)`` over the retained grid; exact for integer evaluators."""
    horizons = tuple(int(T) for T in horizons)
    if len(horizons) != pattern.distinct:
        raise AveragingError(
            f"pattern has {pattern.distinct} distinct times but {len(horizons)} horizons were given"
        )
    if min_gap < 0:
        raise AveragingError("min_gap must be >= 0")
    if pattern.distinct == 0:
        return evaluator(()), 1
    fast = getattr(evaluator, "grid_sum", None)
    if fast is not None:
        return fast(horizons, min_gap=min_gap, threads=threads)
    return _grid_sum(evaluator, horizons, min_gap, threads)


def average(pattern: TimePattern, evaluator, schedule, threads=None):
    horizons = schedule.horizons if isinstance(schedule, AveragingSchedule) else schedule
    total, count = summed(pattern, evaluator, horizons, 0, threads)
    return _divide(total, count)


def diagonal_skip_average(pattern: TimePattern, evaluator, schedule, min_gap: int, threads=None):
    """Average over grid points whose distinct copies sit at least ``min_gap`` apart."""
    horizons = schedule.horizons if isinstance(schedule, AveragingSchedule) else schedule
    total, count = summed(pattern, evaluator, horizons, min_gap, threads)
    if count == 0:
        raise AveragingError(f"min_gap={min_gap} excludes every grid point of {tuple(horizons)}")
    return _divide(total, count)


@dataclass
class ConvergenceReport:
    rows: list  # (horizons, estimate, delta or None)
    cauchy: bool

    def estimates(self):
        return [r[1] for r in self.rows]

    def deltas(self):
        return [r[2] for r in self.rows]


def convergence_report(pattern: TimePattern, evaluator, ladder, min_gap: int = 0, threads=None):
    """Estimates along a ladder of horizon tuples.

    ``ladder`` entries are horizon tuples or plain ints (equal horizons).  The
    ``cauchy`` flag is False when a successive difference grows.
    """
    if not ladder:
        raise AveragingError("ladder must not be empty")
    rows = []
    prev = None
    for rung in ladder:
        hs = tuple([int(rung)] * pattern.distinct) if isinstance(rung, int) else tuple(rung)
        est = diagonal_skip_average(pattern, evaluator, hs, min_gap, threads) if min_gap else \
            average(pattern, evaluator, hs, threads)
        delta = None if prev is None else abs(est - prev)
        rows.append((hs, est, delta))
        prev = est
    deltas = [r[2] for r in rows if r[2] is not None]
    cauchy = all(b <= a for a, b in zip(deltas, deltas[1:]))
    return ConvergenceReport(rows, cauchy)


def compare_schedules(pattern: TimePattern, evaluator, T: int, power: int = 2, threads=None):
    """Joint equal-horizon estimate vs a staircase of nested horizons.

    Returns ``(equal, staircase, abs difference)``; a large difference hints
    that the order of the limits matters for this evaluator.
    """
    s = pattern.distinct
    eq = average(pattern, evaluator, AveragingSchedule.equal(s, T), threads)
    st = average(pattern, evaluator, AveragingSchedule.staircase(s, T, power), threads)
    return eq, st, abs(eq - st)
