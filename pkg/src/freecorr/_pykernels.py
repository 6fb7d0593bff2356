"""Pure-Python kernels; same contracts as the compiled ``_ckernels`` module.

``bits`` is the lookup table from :meth:`BitStream.table`: ``bits[lag]`` is
a(lag) for lag >= 1.
"""
from __future__ import annotations

import itertools
from bisect import bisect_left


def reduce_word(times, bits):
    """Sort ``e(t1) e(t2) ...`` into increasing times, cancelling equal pairs.

    Insertion sort: each new generator moves left past every larger one,
    collecting (-1)**a(lag) per swap, and annihilates an equal time if it
    meets one.  Returns ``(sign, remaining_times)``.
    """
    stack: list[int] = []
    parity = 0
    for x in times:
        pos = bisect_left(stack, x)
        for y in stack[pos:]:
            if y != x:
                parity ^= bits[y - x]
        if pos < len(stack) and stack[pos] == x:
            del stack[pos]
        else:
            stack.insert(pos, x)
    return (-1 if parity else 1), stack


def word_sign(times, bits) -> int:
    """Tracial expectation of the word: its sign if fully cancelled, else 0."""
    sign, rest = reduce_word(times, bits)
    return 0 if rest else sign


def _multiplicity(d, horizons):
    # number of t0 in [0, T0] with 0 <= t0 + d_k <= T_k for all k
    lo = 0
    hi = horizons[0]
    for dk, Tk in zip(d, horizons[1:]):
        if -dk > lo:
            lo = -dk
        if Tk - dk < hi:
            hi = Tk - dk
    return hi - lo + 1 if hi >= lo else 0


def grid_sum(gen_copy, gen_offset, horizons, bits, min_gap, lo, hi):
    """Sum of word signs over the time grid, collapsed along the diagonal.

    Copy ``c`` sits at time ``t_c`` in ``[0, horizons[c]]`` and generator
    ``j`` at ``t_{gen_copy[j]} + gen_offset[j]``.  Signs depend only on time
    differences, so the grid is walked over difference vectors
    ``d_k = t_k - t_0`` with ``d_1`` restricted to ``[lo, hi)``, each weighted
    by the number of grid points sharing it.  Points where two copies are
    closer than ``min_gap`` are skipped.  Returns ``(signed_total, points)``.
    """
    s = len(horizons)
    gen_copy = list(gen_copy)
    gen_offset = list(gen_offset)
    T0 = horizons[0]
    if s == 1:
        times = [o for o in gen_offset]
        return word_sign(times, bits) * (T0 + 1), T0 + 1
    ranges = [range(max(lo, -T0), min(hi, horizons[1] + 1))]
    ranges += [range(-T0, Tk + 1) for Tk in horizons[2:]]
    total = 0
    count = 0
    for d in itertools.product(*ranges):
        if min_gap > 0 and not _gaps_ok(d, min_gap):
            continue
        mult = _multiplicity(d, horizons)
        if not mult:
            continue
        pos = (0,) + d
        times = [pos[c] + o for c, o in zip(gen_copy, gen_offset)]
        total += word_sign(times, bits) * mult
        count += mult
    return total, count


def _gaps_ok(d, min_gap):
    pos = (0,) + tuple(d)
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if abs(pos[i] - pos[j]) < min_gap:
                return False
    return True
