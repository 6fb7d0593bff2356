"""Commutation bit sequences a(1), a(2), ...

``a(t)`` fixes the sign picked up when two shift generators ``t`` apart are
swapped.  Every stream is random access: ``bit(t)`` never depends on which
other bits were queried before, so lag sweeps can run in any order and in
parallel.  Bernoulli streams get that from a counter-based hash of
``(seed, t)``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    # SplitMix64 finalizer; uint64 arithmetic wraps mod 2**64
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def _uniforms(seed: int, ts: np.ndarray) -> np.ndarray:
    key = _splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]
    with np.errstate(over="ignore"):
        h = _splitmix64(ts.astype(np.uint64) * _GOLDEN ^ key)
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


class StreamError(ValueError):
    pass


@dataclass(frozen=True)
class BitStream:
    """A deterministic 0/1 sequence indexed from t = 1.

    ``kind`` is one of ``constant``, ``periodic``, ``thue-morse``,
    ``bernoulli``, ``explicit``.
    """

    kind: str
    value: int = 0
    pattern: tuple = ()
    p: float = 0.5
    seed: int = 0
    source: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False, hash=False)

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, b: int) -> "BitStream":
        if b not in (0, 1):
            raise StreamError(f"constant bit must be 0 or 1, got {b!r}")
        return cls("constant", value=b)

    @classmethod
    def periodic(cls, pattern) -> "BitStream":
        pattern = tuple(int(c) for c in pattern)
        if not pattern or any(b not in (0, 1) for b in pattern):
            raise StreamError(f"periodic pattern must be a nonempty 0/1 string, got {pattern!r}")
        return cls("periodic", pattern=pattern)

    @classmethod
    def thue_morse(cls) -> "BitStream":
        return cls("thue-morse")

    @classmethod
    def bernoulli(cls, p: float = 0.5, seed: int = 0) -> "BitStream":
        if not 0.0 <= p <= 1.0:
            raise StreamError(f"bernoulli probability must lie in [0, 1], got {p!r}")
        return cls("bernoulli", p=float(p), seed=int(seed))

    @classmethod
    def explicit(cls, bits, source: str = "") -> "BitStream":
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise StreamError("explicit streams hold only 0/1 values")
        return cls("explicit", pattern=bits, source=source)

    @classmethod
    def from_file(cls, path) -> "BitStream":
        bits = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            if line not in ("0", "1"):
                raise StreamError(f"{path}:{lineno}: expected 0 or 1, got {line!r}")
            bits.append(int(line))
        return cls.explicit(bits, source=str(path))

    # -- evaluation -------------------------------------------------------
    def bit(self, t: int) -> int:
        if t < 1:
            raise StreamError(f"a(t) is defined for t >= 1 only, got t={t}")
        return int(self.bits(np.array([t], dtype=np.int64))[0])

    __call__ = bit

    def bits(self, ts) -> np.ndarray:
        """Vectorised ``bit`` over an array of positive times (uint8 result)."""
        ts = np.asarray(ts, dtype=np.int64)
        if ts.size and ts.min() < 1:
            raise StreamError("a(t) is defined for t >= 1 only")
        if self.kind == "constant":
            return np.full(ts.shape, self.value, dtype=np.uint8)
        if self.kind == "periodic":
            pat = np.array(self.pattern, dtype=np.uint8)
            return pat[(ts - 1) % len(pat)]
        if self.kind == "thue-morse":
            return _popcount_parity(ts)
        if self.kind == "bernoulli":
            return (_uniforms(self.seed, ts) < self.p).astype(np.uint8)
        if self.kind == "explicit":
            if ts.size and ts.max() > len(self.pattern):
                raise StreamError(
                    f"explicit stream {self.source or ''} has {len(self.pattern)} bits, "
                    f"a({int(ts.max())}) requested"
                )
            pat = np.array(self.pattern, dtype=np.uint8)
            return pat[ts - 1]
        raise StreamError(f"unknown stream kind {self.kind!r}")

    def table(self, max_lag: int) -> np.ndarray:
        """``a`` as a uint8 array of length ``max_lag + 1``; slot 0 is unused and 0.

        Prefixes are cached per stream; the returned array must not be mutated.
        """
        with self._lock:
            cached = self._cache.get("table")
            if cached is not None and len(cached) > max_lag:
                return cached[: max_lag + 1]
        out = np.zeros(max_lag + 1, dtype=np.uint8)
        if max_lag >= 1:
            out[1:] = self.bits(np.arange(1, max_lag + 1, dtype=np.int64))
        out.setflags(write=False)
        with self._lock:
            cached = self._cache.get("table")
            if cached is None or len(cached) < len(out):
                self._cache["table"] = out
        return out

    def empirical_mean(self, T: int) -> float:
        if T < 1:
            raise StreamError("T must be >= 1")
        return float(self.table(T)[1:].sum()) / T

    def spec(self) -> str:
        """Config string that :func:`parse_stream` maps back to this stream."""
        if self.kind == "constant":
            return f"constant:{self.value}"
        if self.kind == "periodic":
            return "periodic:" + "".join(map(str, self.pattern))
        if self.kind == "thue-morse":
            return "thue-morse"
        if self.kind == "bernoulli":
            return f"bernoulli:{self.p:g}:seed={self.seed}"
        if self.source:
            return f"file:{self.source}"
        return "explicit:" + "".join(map(str, self.pattern))

    def __str__(self):
        return self.spec()


def _popcount_parity(ts: np.ndarray) -> np.ndarray:
    x = ts.astype(np.uint64)
    parity = np.zeros(ts.shape, dtype=np.uint64)
    while np.any(x):
        parity ^= x & np.uint64(1)
        x = x >> np.uint64(1)
    return parity.astype(np.uint8)


def parse_stream(text: str) -> BitStream:
    """Parse ``constant:0``, ``periodic:0110``, ``thue-morse``,
    ``bernoulli:0.5:seed=42``, ``file:<path>`` or ``explicit:0101``."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    try:
        if kind == "constant":
            return BitStream.constant(int(rest))
        if kind == "periodic":
            return BitStream.periodic(rest)
        if kind in ("thue-morse", "thue_morse", "thuemorse"):
            if rest:
                raise StreamError("thue-morse takes no parameters")
            return BitStream.thue_morse()
        if kind == "bernoulli":
            p, seed = 0.5, 0
            for part in filter(None, rest.split(":")):
                if part.startswith("seed="):
                    seed = int(part[5:])
                else:
                    p = float(part)
            return BitStream.bernoulli(p, seed)
        if kind == "file":
            return BitStream.from_file(rest)
        if kind == "explicit":
            return BitStream.explicit(rest)
    except StreamError:
        raise
    except (ValueError, OSError) as exc:
        raise StreamError(f"bad stream spec {text!r}: {exc}") from None
    raise StreamError(f"unknown stream kind {kind!r} in {text!r}")
