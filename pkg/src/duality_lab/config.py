"""Central tolerances, RNG construction and backend selection."""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-12         # entrywise |M - M^dagger| accepted before symmetrization
    gram_psd: float = 1e-12     # most negative Gram eigenvalue accepted
    gram_diag: float = 1e-12    # |G_ii - 1|
    trace: float = 1e-10        # |Tr rho - 1|
    psd: float = 1e-10          # most negative density-matrix eigenvalue accepted
    norm: float = 1e-12         # pure-state normalization
    wootters_clip: float = 1e-10
    relation: float = 1e-9      # one-sided slack for inequalities, two-sided for identities
    ensemble: float = 1e-10


TOL = Tolerances()

# PCG64 output is specified bit-for-bit, so seeded streams are platform independent.
BIT_GENERATOR = np.random.PCG64


def make_rng(seed, *stream) -> np.random.Generator:
    """Generator for ``seed``; extra integers select an independent sub-stream."""
    if isinstance(seed, np.random.Generator):
        return seed
    head = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    entropy = [int(s) for s in (*head, *stream)]
    return np.random.Generator(BIT_GENERATOR(np.random.SeedSequence(entropy)))


def numba_enabled() -> bool:
    """False when DUALITY_LAB_DISABLE_NUMBA is set to a truthy value."""
    flag = os.environ.get("DUALITY_LAB_DISABLE_NUMBA", "")
    return flag.strip().lower() not in {"1", "true", "yes", "on"}


def worker_cap() -> int:
    raw = os.environ.get("DUALITY_LAB_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = os.cpu_count() or 1
    return max(1, cap)
