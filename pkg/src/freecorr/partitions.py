"""Set partitions as restricted growth strings, plus small counting helpers."""
from __future__ import annotations

import math
from typing import Iterator


def set_partitions(n: int, min_block: int = 1, even_blocks: bool = False) -> Iterator[tuple]:
    """Yield restricted growth strings of length ``n``.

    ``rgs[i]`` is the block of position ``i``; blocks are numbered by first
    appearance.  Blocks smaller than ``min_block`` (or of odd size when
    ``even_blocks``) are pruned while generating.
    """
    if n == 0:
        yield ()
        return
    rgs = [0] * n
    sizes = [0] * (n + 1)

    def feasible(pos, nblocks):
        # every short block still needs enough remaining positions
        remaining = n - pos
        need = 0
        for b in range(nblocks):
            s = sizes[b]
            if s < min_block:
                need += min_block - s
            elif even_blocks and s % 2:
                need += 1
        return need <= remaining

    def rec(pos, nblocks):
        if pos == n:
            for b in range(nblocks):
                if sizes[b] < min_block or (even_blocks and sizes[b] % 2):
                    return
            yield tuple(rgs)
            return
        for b in range(nblocks + 1):
            rgs[pos] = b
            sizes[b] += 1
            nb = max(nblocks, b + 1)
            if feasible(pos + 1, nb):
                yield from rec(pos + 1, nb)
            sizes[b] -= 1

    yield from rec(0, 0)


def block_count(rgs) -> int:
    return max(rgs) + 1 if rgs else 0


def blocks(rgs) -> list:
    out: list = [[] for _ in range(block_count(rgs))]
    for i, b in enumerate(rgs):
        out[b].append(i)
    return out


def is_noncrossing(rgs) -> bool:
    bl = blocks(rgs)
    for x in range(len(bl)):
        for y in range(len(bl)):
            if x == y:
                continue
            for a in bl[x]:
                for c in bl[x]:
                    if a >= c:
                        continue
                    for b in bl[y]:
                        for d in bl[y]:
                            if a < b < c < d:
                                return False
    return True


def falling_factorial(N: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= N - j
    return out


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def double_factorial(n: int) -> int:
    """n!! with the convention (-1)!! = 0!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
