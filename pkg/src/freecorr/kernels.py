"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module.  Setting ``FREECORR_PURE=1`` forces the
fallback.  Both produce identical integers.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels

if os.environ.get("FREECORR_PURE", "") not in ("", "0"):
    _ckernels = None
else:
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

# d_1 values per work unit; fixed so partial sums never depend on thread count
CHUNK = 64


def max_threads() -> int:
    raw = os.environ.get("FREECORR_THREADS", "")
    if raw.strip():
        n = int(raw)
        if n < 1:
            raise ValueError("FREECORR_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _impl(backend):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        return _ckernels
    if backend == "python":
        return _pykernels
    raise ValueError(f"unknown backend {backend!r}")


def _table_arg(impl, bits):
    if impl is _pykernels:
        return bytes(np.asarray(bits, dtype=np.uint8))
    return np.ascontiguousarray(bits, dtype=np.uint8)


def word_sign(times, bits, backend=None) -> int:
    impl = _impl(backend)
    return impl.word_sign(list(times), _table_arg(impl, bits))


def reduce_word(times, bits, backend=None):
    impl = _impl(backend)
    return impl.reduce_word(list(times), _table_arg(impl, bits))


def grid_sum(gen_copy, gen_offset, horizons, bits, min_gap=0, threads=None, backend=None):
    """Exact ``(signed_total, points)`` over the whole grid; see ``_pykernels.grid_sum``."""
    impl = _impl(backend)
    table = _table_arg(impl, bits)
    gen_copy = [int(c) for c in gen_copy]
    gen_offset = [int(o) for o in gen_offset]
    horizons = [int(T) for T in horizons]
    if len(horizons) == 1:
        return impl.grid_sum(gen_copy, gen_offset, horizons, table, int(min_gap), 0, 1)
    first, last = -horizons[0], horizons[1] + 1
    bounds = [(lo, min(lo + CHUNK, last)) for lo in range(first, last, CHUNK)]
    workers = min(threads or max_threads(), len(bounds))

    def run(b):
        return impl.grid_sum(gen_copy, gen_offset, horizons, table, int(min_gap), b[0], b[1])

    if workers <= 1:
        parts = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    total = sum(p[0] for p in parts)
    count = sum(p[1] for p in parts)
    return total, count
