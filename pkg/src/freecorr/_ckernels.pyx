# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pykernels``; see that module for contracts."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef int _word_sign(const i64* times, int n, const unsigned char* bits,
                    i64 nbits, i64* stack) noexcept nogil:
    # returns -1/0/+1, or 2 if a lag falls outside the bit table
    cdef int k = 0, pos, j, j2, parity = 0
    cdef i64 x, lag
    for j in range(n):
        x = times[j]
        pos = k
        while pos > 0 and stack[pos - 1] > x:
            pos -= 1
            lag = stack[pos] - x
            if lag >= nbits:
                return 2
            parity ^= bits[lag]
        if pos > 0 and stack[pos - 1] == x:
            # equal time: drop the pair
            for j2 in range(pos - 1, k - 1):
                stack[j2] = stack[j2 + 1]
            k -= 1
        else:
            for j2 in range(k, pos, -1):
                stack[j2] = stack[j2 - 1]
            stack[pos] = x
            k += 1
    if k:
        return 0
    return -1 if parity else 1


def reduce_word(times, const unsigned char[::1] bits):
    cdef list stack = []
    cdef int parity = 0
    cdef Py_ssize_t pos
    cdef object x, y
    for x in times:
        pos = len(stack)
        while pos > 0 and stack[pos - 1] > x:
            pos -= 1
            parity ^= bits[stack[pos] - x]
        if pos > 0 and stack[pos - 1] == x:
            del stack[pos - 1]
        else:
            stack.insert(pos, x)
    return (-1 if parity else 1), stack


def word_sign(times, const unsigned char[::1] bits):
    cdef Py_ssize_t n = len(times), j
    cdef i64* buf = <i64*> malloc(2 * (n + 1) * sizeof(i64))
    cdef int r
    if buf == NULL:
        raise MemoryError()
    try:
        for j in range(n):
            buf[j] = times[j]
        r = _word_sign(buf, <int> n, &bits[0], bits.shape[0], buf + n + 1)
    finally:
        free(buf)
    if r == 2:
        raise IndexError("lag exceeds the bit table")
    return r


def grid_sum(gen_copy, gen_offset, horizons, const unsigned char[::1] bits,
             i64 min_gap, i64 lo, i64 hi):
    cdef int n = len(gen_copy), s = len(horizons), j, k, r = 0, ok
    cdef i64 T0, total = 0, count = 0, mlo, mhi, mult, a, b, nbits = bits.shape[0]
    cdef i64* copy_ = <i64*> malloc(n * sizeof(i64) + 1)
    cdef i64* off = <i64*> malloc(n * sizeof(i64) + 1)
    cdef i64* T = <i64*> malloc(s * sizeof(i64))
    cdef i64* pos = <i64*> malloc(s * sizeof(i64))
    cdef i64* dlo = <i64*> malloc(s * sizeof(i64))
    cdef i64* dhi = <i64*> malloc(s * sizeof(i64))
    cdef i64* times = <i64*> malloc(n * sizeof(i64) + 1)
    cdef i64* stack = <i64*> malloc(n * sizeof(i64) + 8)
    try:
        for j in range(n):
            copy_[j] = gen_copy[j]
            off[j] = gen_offset[j]
        for k in range(s):
            T[k] = horizons[k]
        T0 = T[0]
        if s == 1:
            for j in range(n):
                times[j] = off[j]
            r = _word_sign(times, n, &bits[0], nbits, stack)
            if r == 2:
                raise IndexError("lag exceeds the bit table")
            return r * (T0 + 1), T0 + 1
        pos[0] = 0
        dlo[1] = lo if lo > -T0 else -T0
        dhi[1] = hi - 1 if hi - 1 < T[1] else T[1]
        for k in range(2, s):
            dlo[k] = -T0
            dhi[k] = T[k]
        if dlo[1] > dhi[1]:
            return 0, 0
        for k in range(1, s):
            pos[k] = dlo[k]
        with nogil:
            while True:
                ok = 1
                if min_gap > 0:
                    for a in range(s):
                        for b in range(a + 1, s):
                            if pos[a] - pos[b] < min_gap and pos[b] - pos[a] < min_gap:
                                ok = 0
                if ok:
                    mlo = 0
                    mhi = T0
                    for k in range(1, s):
                        if -pos[k] > mlo:
                            mlo = -pos[k]
                        if T[k] - pos[k] < mhi:
                            mhi = T[k] - pos[k]
                    mult = mhi - mlo + 1
                    if mult > 0:
                        for j in range(n):
                            times[j] = pos[copy_[j]] + off[j]
                        r = _word_sign(times, n, &bits[0], nbits, stack)
                        if r == 2:
                            break
                        total += r * mult
                        count += mult
                # advance the mixed-radix counter, last coordinate fastest
                k = s - 1
                while k >= 1:
                    pos[k] += 1
                    if pos[k] <= dhi[k]:
                        break
                    pos[k] = dlo[k]
                    k -= 1
                if k < 1:
                    break
        if r == 2:
            raise IndexError("lag exceeds the bit table")
        return total, count
    finally:
        free(copy_); free(off); free(T); free(pos); free(dlo); free(dhi)
        free(times); free(stack)
