"""Minimum-error discrimination of pure detector states.

The closed-form upper bound is what the complementarity relations use. The
exact two-state value, the square-root (pretty good) measurement and the
iterated POVM optimizer serve as independent checks on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .config import TOL
from .qmat import ContractError, as_hermitian, gram_to_vectors, inv_sqrt_psd, trace_norm

DEFAULT_MAX_ITER = 5000
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class Ensemble:
    """Pure states with priors ``q``; ``gram[i, k] = <d_k|d_i>``."""
    q: np.ndarray
    gram: np.ndarray = field(repr=False)

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        g = as_hermitian(self.gram)
        if q.ndim != 1 or g.shape != (q.size, q.size):
            raise ContractError(f"priors of length {q.size} do not match Gram shape {g.shape}")
        if np.any(q < -1e-12):
            raise ContractError("priors must be nonnegative")
        if abs(q.sum() - 1.0) > TOL.ensemble:
            raise ContractError(f"priors sum to {q.sum()!r}, not 1")
        q = np.clip(q, 0.0, None)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "gram", g)

    @property
    def n(self) -> int:
        return self.q.size

    @cached_property
    def vectors(self) -> np.ndarray:
        return gram_to_vectors(self.gram)

    @classmethod
    def from_output(cls, out) -> "Ensemble":
        """Detector ensemble of an :class:`~duality_lab.interferometer.InterferometerOutput`."""
        q = out.q / out.q.sum()
        return cls(q, out.detectors.gram)


def ps_upper_bound(e: Ensemble) -> float:
    """1/n + 1/(2n) sum_{i,k} ||q_i d_i - q_k d_k||_1."""
    n = e.n
    return 1.0 / n + kernels.pair_trace_norm_sum(e.q, e.gram) / (2.0 * n)


def ps_upper_bound_batch(q, gram) -> np.ndarray:
    """Vectorized :func:`ps_upper_bound` over arrays of shape (B, n) and (B, n, n)."""
    q = np.asarray(q, dtype=float)
    n = q.shape[1]
    return 1.0 / n + kernels.pair_trace_norm_sum_batch(q, np.asarray(gram)) / (2.0 * n)


def ps_helstrom_n2(e: Ensemble) -> float:
    """Exact two-state optimum 1/2 + 1/2 ||q_1 d_1 - q_2 d_2||_1."""
    if e.n != 2:
        raise ContractError(f"Helstrom formula needs exactly two states, got {e.n}")
    v = e.vectors
    d1, d2 = v[:, 0], v[:, 1]
    t = e.q[0] * np.outer(d1, d1.conj()) - e.q[1] * np.outer(d2, d2.conj())
    return 0.5 + 0.5 * trace_norm(t)


def success_probability(e: Ensemble, povm) -> float:
    v = e.vectors
    vals = np.einsum("aj,jab,bj->j", v.conj(), np.asarray(povm), v)
    return float(np.real(e.q @ vals))


def pgm_povm(e: Ensemble) -> np.ndarray:
    """Square-root measurement, completed on the kernel of the average state."""
    return _pgm_on(e.vectors, e.q)


def ps_pgm(e: Ensemble) -> float:
    return success_probability(e, pgm_povm(e))


@dataclass(frozen=True)
class OptimizeResult:
    value: float
    povm: np.ndarray = field(repr=False)
    iterations: int
    converged: bool


def ps_optimize(e: Ensemble, max_iter: int = DEFAULT_MAX_ITER,
                tol: float = DEFAULT_TOL) -> OptimizeResult:
    """Numerical optimum over all POVMs, started from the square-root measurement.

    States with zero prior are removed first; their POVM elements come back as
    zeros (the completion goes to the largest-prior element). Hitting
    ``max_iter`` is reported through ``converged`` rather than raised.
    """
    v = e.vectors
    r = v.shape[0]
    active = np.flatnonzero(e.q > 1e-15)
    povm = np.zeros((e.n, r, r), dtype=np.complex128)
    if active.size == 1:
        povm[active[0]] = np.eye(r)
        return OptimizeResult(1.0, povm, 0, True)
    sub = Ensemble(e.q[active] / e.q[active].sum(), e.gram[np.ix_(active, active)])
    # keep the parent's vectors so the POVM lives on the same space
    vs = v[:, active]
    pov, _, it, ok = kernels.jrf_optimize(vs, sub.q, _pgm_on(vs, sub.q), max_iter, tol)
    povm[active] = _repair(pov)
    value = success_probability(e, povm)
    # slow runs can stop just short of always guessing the likeliest state
    best = int(np.argmax(e.q))
    if e.q[best] > value:
        povm[:] = 0.0
        povm[best] = np.eye(r)
        value = float(e.q[best])
    return OptimizeResult(value, povm, it, ok)


def _repair(povm) -> np.ndarray:
    """Clip rounding-level negative eigenvalues and renormalize so the sum is I."""
    w, v = np.linalg.eigh(povm)
    clipped = (v * np.clip(w, 0.0, None)[:, None, :]) @ np.conj(np.transpose(v, (0, 2, 1)))
    s = inv_sqrt_psd(clipped.sum(axis=0))
    out = s @ clipped @ s
    return 0.5 * (out + np.conj(np.transpose(out, (0, 2, 1))))


def _pgm_on(v, q) -> np.ndarray:
    r = v.shape[0]
    avg = (v * q) @ v.conj().T
    s = inv_sqrt_psd(avg)
    povm = np.einsum("ab,bj,cj,cd->jad", s, v * q, v.conj(), s)
    povm = 0.5 * (povm + np.conj(np.transpose(povm, (0, 2, 1))))
    deficit = np.eye(r) - povm.sum(axis=0)
    povm[int(np.argmax(q))] += 0.5 * (deficit + deficit.conj().T)
    return np.ascontiguousarray(povm)


def povm_is_feasible(povm, psd_tol: float = 1e-9, sum_tol: float = 1e-8) -> bool:
    p = np.asarray(povm)
    if np.max(np.abs(p.sum(axis=0) - np.eye(p.shape[1]))) > sum_tol:
        return False
    return all(np.linalg.eigvalsh(0.5 * (x + x.conj().T))[0] >= -psd_tol for x in p)


@dataclass(frozen=True)
class DiscriminationResult:
    ps_upper: float
    ps_exact: float | None
    ps_pgm: float
    ps_opt: float
    iterations: int
    converged: bool


def discriminate(e: Ensemble, max_iter: int = DEFAULT_MAX_ITER,
                 tol: float = DEFAULT_TOL) -> DiscriminationResult:
    opt = ps_optimize(e, max_iter, tol)
    return DiscriminationResult(
        ps_upper=ps_upper_bound(e),
        ps_exact=ps_helstrom_n2(e) if e.n == 2 else None,
        ps_pgm=ps_pgm(e),
        ps_opt=opt.value,
        iterations=opt.iterations,
        converged=opt.converged,
    )
