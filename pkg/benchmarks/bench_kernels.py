"""Compare the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row reports the best wall time per backend and checks that both
backends return identical arrays.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bagrefine.graph import grid, petersen, random_planar_graph
from bagrefine.kernels import jit, numpy_backend


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(quick):
    sizes = (10, 14) if quick else (10, 14, 17, 19)
    for n in sizes:
        g = random_planar_graph(n, seed=n)
        yield f"tw_dp planar n={n}", "tw_dp", (g.mask_array(), g.n)
    yield "tw_dp grid 4x4", "tw_dp", (grid(4, 4).mask_array(), 16)
    for n in (10, 14) if quick else (10, 14, 16):
        g = random_planar_graph(n, seed=100 + n)
        yield f"pw_dp planar n={n}", "pw_dp", (g.mask_array(), g.n)
    yield "pw_dp petersen", "pw_dp", (petersen().mask_array(), 10)
    rng = np.random.default_rng(0)
    for k in (10_000, 200_000) if quick else (10_000, 200_000, 1_000_000):
        # k chords on m = 4k slots; endpoints must stay below m
        m = 4 * k
        a = rng.integers(0, m, size=k)
        b = rng.integers(0, m, size=k)
        p, q = np.minimum(a, b).astype(np.int64), np.maximum(a, b).astype(np.int64)
        yield f"nested_counts k={k}", "nested_counts", (p, q, m)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small inputs only")
    args = ap.parse_args(argv)
    if jit is None:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'case':<26}{'numba s':>12}{'numpy s':>12}{'speedup':>10}  same")
    for label, name, inputs in cases(args.quick):
        # first call compiles (or loads the cache); keep it out of the timing
        getattr(jit, name)(*inputs)
        t_jit, r_jit = best_of(lambda: getattr(jit, name)(*inputs), args.repeat)
        t_np, r_np = best_of(lambda: getattr(numpy_backend, name)(*inputs), args.repeat)
        print(f"{label:<26}{t_jit:>12.4f}{t_np:>12.4f}{t_np / max(t_jit, 1e-9):>10.1f}  {_same(r_jit, r_np)}")


if __name__ == "__main__":
    main()
