"""Time the compiled kernels against the pure NumPy fallback.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py
    TREEJACOBI_PURE=1 python3 benchmarks/bench_kernels.py   # force fallback

The three kernels are exercised on representative workloads: the damped
half-tree recursion on a dense energy grid, the rotation eigensolver on a
medium dense matrix, and the frontier expansion that builds cover balls.
"""

import argparse
import time

import numpy as np

from treejacobi._kernels import HAVE_COMPILED, compiled, pure
from treejacobi.cover import build_ball
from treejacobi.graphs import JacobiParams, free_model, from_edge_list, indexed

Q3 = [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3),
      (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7)]


def _workloads(rng):
    graph, _ = from_edge_list([(f"v{u}", f"v{v}") for u, v in Q3])
    params = JacobiParams(
        a={eid: 1.0 + rng.uniform(0.0, 0.5) for eid, _, _ in graph.edges},
        b={v: rng.uniform(-0.5, 0.5) for v in graph.vertices})
    ig = indexed(graph, params)
    zs = np.linspace(-4.0, 4.0, 2001) + 1e-3j

    mat = rng.normal(size=(80, 80))
    mat = (mat + mat.T) / 2.0

    free, free_params = free_model(3)
    ball = build_ball(free, free_params, "v0", 17)
    ig_free = indexed(free, free_params)
    order = np.argsort(ig_free.tail, kind="stable")
    out_ptr = np.zeros(free.p + 1, dtype=np.int64)
    np.cumsum(np.bincount(ig_free.tail, minlength=free.p), out=out_ptr[1:])
    frontier = np.flatnonzero(ball.depth == 17)
    proj = ball.proj[frontier]
    ein = ball.ein[frontier]

    few = zs[::286].copy()  # the band-edge bisection regime: tiny batches
    return {
        "m_fixed_point (2001 energies)": lambda impl: impl.m_fixed_point(
            zs, ig.b, ig.tail, ig.head, ig.a2_dir, 0.5, 1e-13, 100_000),
        "m_fixed_point (8 energies)": lambda impl: impl.m_fixed_point(
            few, ig.b, ig.tail, ig.head, ig.a2_dir, 0.5, 1e-13, 100_000),
        "jacobi_eigh (80x80)": lambda impl: impl.jacobi_eigh(mat),
        "expand_frontier (393k nodes)": lambda impl: impl.expand_frontier(
            proj, ein, out_ptr, order, ig_free.head),
    }


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions per kernel (best is kept)")
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled extension not importable; timing the fallback only")
    rng = np.random.default_rng(0)
    workloads = _workloads(rng)

    width = max(len(name) for name in workloads)
    header = f"{'kernel'.ljust(width)}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in workloads.items():
        t_pure = _time(lambda: call(pure), args.repeat)
        if HAVE_COMPILED:
            t_comp = _time(lambda: call(compiled), args.repeat)
            print(f"{name.ljust(width)}  {t_pure:>9.4f}s  {t_comp:>9.4f}s  "
                  f"{t_pure / t_comp:>7.1f}x")
        else:
            print(f"{name.ljust(width)}  {t_pure:>9.4f}s  {'-':>10}  {'-':>8}")


if __name__ == "__main__":
    main()
