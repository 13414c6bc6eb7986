"""Time the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call per kernel is excluded (JIT compile or cache load).
"""
import argparse
import time

import numpy as np

from duality_lab import kernels
from duality_lab.discrimination import Ensemble, pgm_povm
from duality_lab.interferometer import random_detectors
from duality_lab.states import random_mixed


def workloads(seed=0):
    rng = np.random.default_rng(seed)
    mixed = []
    for t in range(500):
        n, m = 2 + t % 4, 1 + t % 4
        rho = random_mixed(n, m, n * m, rng).matrix
        g = random_detectors(n, rng).gram
        q = np.real(np.diag(rho.reshape(n, m, n, m).trace(axis1=1, axis2=3)))
        mixed.append((rho, g, q, n, m))
    ens = []
    for t in range(100):
        n = 2 + t % 4
        e = Ensemble(rng.dirichlet(np.ones(n)), random_detectors(n, rng, dim=n).gram)
        ens.append((e.vectors, e.q, pgm_povm(e)))
    return mixed, ens


def run_pipeline(backend, mixed):
    for rho, g, q, n, m in mixed:
        t = backend.schur_blocks(rho, g, n, m)
        backend.offdiag_sq_sum(t)
        backend.offdiag_abs_sum(t)
        backend.weighted_gram_purity(q, g)
        backend.pair_trace_norm_sum(q, g)


def run_optimizer(backend, ens):
    for v, q, start in ens:
        backend.jrf_optimize(v, q, start, 5000, 1e-10)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    mixed, ens = workloads()
    backends = [kernels.numpy_backend]
    if kernels.numba_backend is not None:
        backends.append(kernels.numba_backend)
        run_pipeline(kernels.numba_backend, mixed[:4])
        run_optimizer(kernels.numba_backend, ens[:2])
    print(f"{'kernel set':<28}{'backend':<8}{'best (s)':>10}")
    results = {}
    for b in backends:
        for label, fn in (("per-trial kernels x500", lambda: run_pipeline(b, mixed)),
                          ("POVM optimizer x100", lambda: run_optimizer(b, ens))):
            results[label, b.NAME] = best_of(fn, args.repeat)
            print(f"{label:<28}{b.NAME:<8}{results[label, b.NAME]:>10.4f}")
    if kernels.numba_backend is not None:
        for label in ("per-trial kernels x500", "POVM optimizer x100"):
            print(f"speedup {label}: {results[label, 'numpy'] / results[label, 'numba']:.2f}x")


if __name__ == "__main__":
    main()
