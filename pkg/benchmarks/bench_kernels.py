"""Time the batched kernels on each available backend.

    python benchmarks/bench_kernels.py [--points 4096] [--dim 4] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from zsdress import kernels


def cases(K, N, rng):
    def r(*shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    u, v, w = r(K, N), r(K, N), r(K)
    L, R, X, Y, d = r(N, N), r(N, N), r(K, N, N), r(K, N, N), r(K, N)
    n, m = r(K, N, 2), r(K, N, 2)
    return {
        "weighted_outer": lambda b: kernels.weighted_outer(u, v, w, backend=b),
        "sandwich": lambda b: kernels.sandwich(L, X, R, backend=b),
        "commutator": lambda b: kernels.commutator(X, Y, backend=b),
        "diag_commutator": lambda b: kernels.diag_commutator(d, X, backend=b),
        "rank_r_projector": lambda b: kernels.rank_r_projector(n, m, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    table = cases(args.points, args.dim, np.random.default_rng(0))
    print(f"{args.points} points, {args.dim}x{args.dim} matrices, best of {args.repeat}")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in table.items():
        times = [min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends]
        row = f"{name:<18}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[backends.index('python')] / times[backends.index('cython')]:11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
