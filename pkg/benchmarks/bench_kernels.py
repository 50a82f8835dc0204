"""Compare the compiled and numpy kernel backends on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from pdrecon import _pykernels
from pdrecon import graphcore as gc

try:
    from pdrecon import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def workloads():
    g4 = gc.paper_gn(4)
    k55 = gc.complete_bipartite(5, 5)
    grid = gc.grid(5, 12)
    pd = _pykernels.PD
    verts = np.nonzero(_pykernels.xset_table(g4.adj_array, g4.n, pd))[0].astype(np.uint64)
    return [
        ("xset_table G4 (2^19 subsets)", lambda k: k.xset_table(g4.adj_array, g4.n, pd)),
        ("xset_table K5,5 zero forcing", lambda k: k.xset_table(k55.adj_array, k55.n, _pykernels.ZF)),
        ("xsets_of_size grid 5x12, c=2", lambda k: k.xsets_of_size(grid.adj_array, grid.n, pd, 2, np.zeros(0, np.uint64))),
        ("tar_connectivity G4", lambda k: k.tar_connectivity(verts, g4.n)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the python backend is timed")
    print(f"{'workload':<34} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for name, fn in workloads():
        tp, op = best_of(lambda: fn(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:<34} {tp:>11.4f} {'-':>11} {'-':>8}")
            continue
        tc, oc = best_of(lambda: fn(_ckernels), args.repeat)
        assert np.array_equal(op, oc), name
        print(f"{name:<34} {tp:>11.4f} {tc:>11.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
