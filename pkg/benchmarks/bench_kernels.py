"""Timing of the elimination backends.

    python benchmarks/bench_kernels.py [--size 1500] [--repeat 3]

Run once normally and once with FATPOINTS_DISABLE_NUMBA=1 to compare the
compiled kernels with the numpy fallback.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fatpoints import _kernels as K
from fatpoints import engine as E
from fatpoints.geometry import Point, all_but_one, fermat_config
from fatpoints.linalg import make_echelon
from fatpoints.scalar import cyclotomic_field, finite_field, prime_field, rational_field


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def low_rank(rng, rows, cols, rank, p):
    A = rng.integers(0, p, size=(rows, rank)).astype(np.int64)
    B = rng.integers(0, p, size=(rank, cols)).astype(np.int64)
    return K.matmul_mod(A, B, p)


def bench_modp(size, repeat, p=7):
    rng = np.random.default_rng(0)
    M = low_rank(rng, 3 * size, size + size // 6, size, p)
    F = prime_field(p)

    def run():
        E_ = make_echelon(F, M.shape[1])
        E_.extend(M)
        return E_.rank

    return best_of(run, repeat)


def bench_table(size, repeat):
    F = finite_field(3, 2)
    rng = np.random.default_rng(1)
    M = rng.integers(0, F.cardinality, size=(size, size + 20)).astype(np.int64)

    def run():
        E_ = make_echelon(F, M.shape[1])
        E_.extend(M)
        return E_.rank

    return best_of(run, repeat)


def bench_integer(size, repeat):
    Q = rational_field()
    rng = np.random.default_rng(2)
    M = rng.integers(-5, 6, size=(size, size + 10)).astype(object)

    def run():
        E_ = make_echelon(Q, M.shape[1])
        E_.extend(M)
        return E_.rank

    return best_of(run, repeat)


def bench_scheme(repeat):
    F = prime_field(3)

    def run():
        E.clear_views()
        S = all_but_one(2, F, Point(F, [1, 0, 0]))
        gens = E.ideal_generators(E.symbolic(S, 1))
        return E.contains(E.symbolic(S, 15), E.power(gens, 10)).verdict

    return best_of(run, repeat)


def bench_descent(repeat):
    K3 = cyclotomic_field(3)

    def run():
        E.clear_views()
        return E.generator_degrees(E.symbolic(fermat_config(3, K3), 3))

    return best_of(run, repeat)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1500, help="rank of the mod-p benchmark matrix")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"kernel backend: {K.BACKEND}")
    rows = [
        (f"mod 7 echelon, rank {args.size}", lambda: bench_modp(args.size, args.repeat)),
        ("F_9 table echelon 300x320", lambda: bench_table(300, args.repeat)),
        ("Q integer echelon 120x130", lambda: bench_integer(120, args.repeat)),
        ("F_3 plane: I^(15) vs I^10", lambda: bench_scheme(args.repeat)),
        ("Q(zeta_3) Fermat: gens of I^(3)", lambda: bench_descent(args.repeat)),
    ]
    for label, fn in rows:
        secs, out = fn()
        print(f"{label:36s} {secs:8.3f} s   ({out})")


if __name__ == "__main__":
    main()
