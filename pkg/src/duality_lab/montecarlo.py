"""Random (state, detector) sampling and seeded verification campaigns."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import make_rng, worker_cap
from .interferometer import random_detectors, two_path
from .qmat import ContractError
from .relations import ComplementarityReport, RelationId, evaluate
from .states import pure_from_branches, random_mixed, random_pure

# below this many trials a process pool costs more than it saves
_PARALLEL_MIN_TRIALS = 2000


@dataclass(frozen=True)
class Campaign:
    relation: RelationId
    n: int
    memory_dim: int
    trials: int
    seed: int
    pure: bool = False
    oracle: bool = False

    def __post_init__(self):
        rel = RelationId(self.relation)
        object.__setattr__(self, "relation", rel)
        if self.n < 2:
            raise ContractError("n must be >= 2")
        if self.trials < 1:
            raise ContractError("trials must be >= 1")
        if self.memory_dim < 1:
            raise ContractError("memory dimension must be >= 1")
        if rel in (RelationId.COR1_N2_IDENTITY, RelationId.COR2_N2_IDENTITY) and self.n != 2:
            raise ContractError(f"{rel.value} is a two-path identity; use n = 2")
        # relations with a fixed memory shape override the requested dimension
        if rel is RelationId.EQ13_NO_MEMORY:
            object.__setattr__(self, "memory_dim", 1)
        elif rel is RelationId.LIMIT_PD_E:
            object.__setattr__(self, "memory_dim", max(self.memory_dim, self.n))
        if rel is RelationId.TH3_ENTANGLEMENT and not self.pure and (self.n, self.memory_dim) != (2, 2):
            raise ContractError("mixed-state entanglement is only available for n = 2, "
                                "memory dimension 2; pass --pure otherwise")


def _random_weights(rng, n):
    w = rng.exponential(size=n)
    return w / w.sum()


def _random_unit(rng, d):
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def sample_input(c: Campaign, trial: int):
    """Deterministic (state, detectors) for one trial of a campaign."""
    rng = make_rng(c.seed, trial)
    n, m, rel = c.n, c.memory_dim, c.relation
    if rel is RelationId.COR2_N2_IDENTITY:
        det = two_path(np.sqrt(0.5) * np.exp(2j * np.pi * rng.random()))
    else:
        det = random_detectors(n, rng)
    if rel is RelationId.EQ13_NO_MEMORY:
        return random_pure(n, 1, rng), det
    if rel is RelationId.LIMIT_PD_V:
        u = _random_unit(rng, m)
        phases = np.exp(2j * np.pi * rng.random(n))
        return pure_from_branches(_random_weights(rng, n), u[:, None] * phases[None, :]), det
    if rel is RelationId.LIMIT_PD_E:
        z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        basis, _ = np.linalg.qr(z)
        return pure_from_branches(_random_weights(rng, n), basis[:, :n]), det
    if c.pure:
        return random_pure(n, m, rng), det
    rank = int(rng.integers(1, n * m + 1))
    return random_mixed(n, m, rank, rng), det


def run_trial(c: Campaign, trial: int) -> ComplementarityReport:
    state, det = sample_input(c, trial)
    return evaluate(c.relation, state, det, oracle=c.oracle)


def _run_chunk(args):
    c, start, stop = args
    return [run_trial(c, t) for t in range(start, stop)]


def run_campaign(c: Campaign, workers: int | None = None) -> list[ComplementarityReport]:
    """Reports for trials 0..trials-1, in trial order regardless of worker count."""
    workers = worker_cap() if workers is None else max(1, workers)
    if workers == 1 or c.trials < _PARALLEL_MIN_TRIALS:
        return _run_chunk((c, 0, c.trials))
    bounds = np.linspace(0, c.trials, workers + 1).astype(int)
    chunks = [(c, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, chunks))
    return [r for part in parts for r in part]
