"""Pauli-string representation of the bit-stream algebra (test oracle).

A string on n slots is stored as two bitmasks ``(x, z)`` plus a phase
exponent ``k`` (the operator is ``i**k`` times the tensor product, slot j
carrying ``X**x_j Z**z_j``).  Generators are placed Jordan-Wigner style:

    e(t_k) = (prod over j < k with a(t_k - t_j) = 1 of Z_j) X_k

so each image is a self-adjoint involution and two images anticommute
exactly when the stream bit at their lag is 1.  The normalized trace kills
every string except the identity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0  # exponent of i, mod 4

    @classmethod
    def from_letters(cls, letters: str, phase: int = 0) -> "PauliString":
        x = z = 0
        y_count = 0
        for j, ch in enumerate(letters):
            if ch in "XY":
                x |= 1 << j
            if ch in "ZY":
                z |= 1 << j
            if ch == "Y":
                y_count += 1
        # Y = i X Z, so X**1 Z**1 = -i Y
        return cls(len(letters), x, z, (phase + y_count) % 4)

    def letters(self) -> str:
        return "".join(_LETTERS[((self.x >> j) & 1, (self.z >> j) & 1)] for j in range(self.n))

    def display_phase(self) -> int:
        """Phase exponent in the I/X/Y/Z letter convention."""
        return (self.phase - _popcount(self.x & self.z)) % 4

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("Pauli strings act on different numbers of slots")
        # (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
        sign = _popcount(self.z & other.x) & 1
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z,
                           (self.phase + other.phase + 2 * sign) % 4)

    @property
    def is_identity_string(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes_with(self, other: "PauliString") -> bool:
        return (_popcount(self.x & other.z) + _popcount(self.z & other.x)) % 2 == 0

    def trace(self) -> complex:
        """Normalized trace: the phase if identity, else 0."""
        if not self.is_identity_string:
            return 0
        return (1, 1j, -1, -1j)[self.phase]

    def __str__(self):
        return ("", "i", "-", "-i")[self.display_phase()] + self.letters()


def identity_string(n: int) -> PauliString:
    return PauliString(n)


def represent(times, stream) -> dict:
    """Map each distinct time to its Pauli-string image."""
    times = list(times)
    if len(set(times)) != len(times):
        raise ValueError("represent needs distinct times")
    if len(times) > 16:
        raise ValueError("at most 16 distinct times are supported")
    ordered = sorted(times)
    n = len(ordered)
    images = {}
    for k, tk in enumerate(ordered):
        z = 0
        for j in range(k):
            if stream.bit(tk - ordered[j]):
                z |= 1 << j
        images[tk] = PauliString(n, 1 << k, z, 0)
    return images


def trace_expectation(times, stream) -> int:
    times = list(times.times if hasattr(times, "times") else times)
    distinct = sorted(set(times))
    if not distinct:
        return 1
    images = represent(distinct, stream)
    prod = identity_string(len(distinct))
    for t in times:
        prod = prod * images[t]
    value = prod.trace()
    if value not in (0, 1, -1):
        raise ArithmeticError(f"non-real trace {value} for a product of self-adjoint generators")
    return int(value.real) if isinstance(value, complex) else int(value)


def random_stream(rng) :
    """One of the four random-access stream families, drawn from ``rng``."""
    from .bitstream import BitStream

    kind = rng.integers(4)
    if kind == 0:
        return BitStream.bernoulli(float(rng.uniform(0.1, 0.9)), int(rng.integers(2**31)))
    if kind == 1:
        return BitStream.constant(int(rng.integers(2)))
    if kind == 2:
        return BitStream.periodic(rng.integers(0, 2, size=int(rng.integers(1, 6))).tolist())
    return BitStream.thue_morse()


def random_word(rng, max_letters: int = 12, max_times: int = 8, max_time: int = 40) -> list:
    pool = rng.choice(np.arange(1, max_time + 1), size=int(rng.integers(1, max_times + 1)), replace=False)
    length = int(rng.integers(0, max_letters + 1))
    return [int(t) for t in rng.choice(pool, size=length)]


def cross_check(n_words: int = 10000, seed: int = 7, n_streams: int = 50):
    """Compare the shift reduction with the Pauli trace on random words.

    Returns ``(matches, total, mismatches)`` where each mismatch is
    ``(times, stream_spec, shift_value, oracle_value)``.
    """
    from . import shift

    rng = np.random.default_rng(seed)
    streams = [random_stream(rng) for _ in range(n_streams)]
    matches = 0
    mismatches = []
    for i in range(n_words):
        stream = streams[i % n_streams]
        times = random_word(rng)
        a = shift.expectation(times, stream)
        b = trace_expectation(times, stream)
        if a == b:
            matches += 1
        else:
            mismatches.append((tuple(times), stream.spec(), a, b))
    return matches, n_words, mismatches
