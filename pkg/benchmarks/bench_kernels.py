"""Compare the compiled and pure-Python kernels on the shift hot loops.

    python3 benchmarks/bench_kernels.py [--T 10000] [--words 20000]
"""
import argparse
import time

import numpy as np

from freecorr import kernels
from freecorr.bitstream import BitStream
from freecorr.pauli import random_word


def timed(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=int, default=10_000)
    ap.add_argument("--words", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    stream = BitStream.bernoulli(0.5, args.seed)
    rng = np.random.default_rng(args.seed)
    words = [random_word(rng) for _ in range(args.words)]
    table = stream.table(64)
    grid_bits = stream.table(2 * args.T + 2)

    print(f"{'kernel':<28}{'backend':<10}{'seconds':>10}  result")
    results = {}
    for backend in backends:
        dt, out = timed(lambda: sum(kernels.word_sign(w, table, backend) for w in words))
        print(f"{'word_sign x' + str(args.words):<28}{backend:<10}{dt:>10.4f}  {out}")
        results[("sign", backend)] = (dt, out)
        dt, out = timed(lambda: kernels.grid_sum([0, 1, 0, 1], [0, 0, 0, 0], [args.T, args.T],
                                                 grid_bits, 0, 1, backend))
        print(f"{'grid_sum 1212 T=' + str(args.T):<28}{backend:<10}{dt:>10.4f}  {out}")
        results[("grid", backend)] = (dt, out)
    if len(backends) == 2:
        for key in ("sign", "grid"):
            (tp, op), (tc, oc) = results[(key, "python")], results[(key, "cython")]
            assert op == oc, f"backends disagree on {key}"
            print(f"{key}: speedup {tp / tc:.1f}x, outputs identical")


if __name__ == "__main__":
    main()
