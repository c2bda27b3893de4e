"""Compare the compiled and pure-Python kernels.

Usage::

    python benchmarks/bench_kernels.py [--n 7] [--repeat 3]

Each workload runs once per backend; the table reports the best wall time
over ``--repeat`` runs and the speedup of the compiled backend.
"""

import argparse
import time

import numpy as np

from leadsel.graph import enumerate_labeled_trees, random_tree
from leadsel.kernels import CENTER, MEDIAN, backends


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(n_enum):
    trees = [g.csr for g in enumerate_labeled_trees(n_enum)]
    rng = np.random.default_rng(0)
    big = random_tree(400, rng)
    big_csr = big.csr
    seqs = [rng.integers(0, 200, 198).astype(np.int64) for _ in range(2000)]
    budget = 4 * n_enum + 10

    def rounds(k):
        for indptr, indices, cost in trees:
            values = np.zeros(n_enum)
            k.run_rounds(indptr, indices, cost, values, 0, MEDIAN, budget, 0.0)
            k.run_rounds(indptr, indices, cost, values, 0, CENTER, budget, 0.0)

    def prufer(k):
        for s in seqs:
            k.prufer_decode(s, 200)

    def distances(k):
        indptr, indices, cost = big_csr
        k.tree_distances(indptr, indices, cost)

    return {
        f"run_rounds, all trees n={n_enum}": rounds,
        "prufer_decode, 2000 x n=200": prufer,
        "tree_distances, n=400": distances,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=7, help="tree size for the enumeration workload")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    impls = backends()
    print(f"backends: {', '.join(impls)}")
    print(f"{'workload':36s}" + "".join(f"{b:>12s}" for b in impls) + f"{'speedup':>10s}")
    for name, fn in workloads(args.n).items():
        t = {b: _best(lambda: fn(k), args.repeat) for b, k in impls.items()}
        speed = t["python"] / t["cython"] if "cython" in t and t["cython"] > 0 else float("nan")
        print(f"{name:36s}" + "".join(f"{t[b]:11.4f}s" for b in impls) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
