"""Which-path detector coupling and the post-interaction reduced states."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .config import TOL, make_rng
from .qmat import (ContractError, as_hermitian, gram_to_vectors, partial_trace,
                   purity, vectors_to_gram)
from .states import DensityMatrix, as_density


@dataclass(frozen=True)
class DetectorConfig:
    """Detector states |d_i>, stored only through their overlaps.

    ``gram[i, k] = <d_k|d_i>``; the initial detector state plays no role
    after the interaction and is not stored.
    """
    gram: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = as_hermitian(self.gram)
        if np.max(np.abs(np.diag(g) - 1.0)) > TOL.gram_diag:
            raise ContractError("detector Gram matrix must have unit diagonal")
        lo = np.linalg.eigvalsh(g)[0]
        if lo < -TOL.gram_psd:
            raise ContractError(f"detector Gram matrix is not PSD (min eigenvalue {lo:.3e})")
        np.fill_diagonal(g, 1.0)
        g.flags.writeable = False
        object.__setattr__(self, "gram", g)

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    @cached_property
    def vectors(self) -> np.ndarray:
        """Explicit detector states as columns; dimension equals the Gram rank."""
        return gram_to_vectors(self.gram)

    def to_dict(self) -> dict:
        return {"n": self.n, "gram_re": self.gram.real.tolist(), "gram_im": self.gram.imag.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "DetectorConfig":
        try:
            g = np.asarray(obj["gram_re"], dtype=float) + 1j * np.asarray(obj["gram_im"], dtype=float)
            n = int(obj["n"])
        except KeyError as exc:
            raise ContractError(f"detector JSON missing field {exc}") from None
        if g.shape != (n, n):
            raise ContractError(f"gram shape {g.shape} does not match n={n}")
        return cls(g)

    @classmethod
    def from_vectors(cls, vecs) -> "DetectorConfig":
        v = np.asarray(vecs, dtype=np.complex128)
        return cls(vectors_to_gram(v / np.linalg.norm(v, axis=0)))


def uniform_overlap(n: int, c: float) -> DetectorConfig:
    """All off-diagonal overlaps equal to sqrt(c) (real, nonnegative)."""
    if not 0.0 <= c <= 1.0:
        raise ContractError(f"squared overlap must lie in [0, 1], got {c}")
    g = np.full((n, n), np.sqrt(c), dtype=np.complex128)
    np.fill_diagonal(g, 1.0)
    return DetectorConfig(g)


def orthogonal_detectors(n: int) -> DetectorConfig:
    return DetectorConfig(np.eye(n, dtype=np.complex128))


def identical_detectors(n: int) -> DetectorConfig:
    return DetectorConfig(np.ones((n, n), dtype=np.complex128))


def two_path(overlap: complex) -> DetectorConfig:
    """n = 2 detectors with <d_2|d_1> = overlap."""
    o = complex(overlap)
    return DetectorConfig(np.array([[1.0, o], [np.conj(o), 1.0]]))


def random_detectors(n: int, seed, *, dim: int | None = None) -> DetectorConfig:
    """Gram of n random unit vectors in C^dim (dim drawn from 1..n when omitted)."""
    rng = make_rng(seed)
    if dim is None:
        dim = int(rng.integers(1, n + 1))
    z = rng.standard_normal((dim, n)) + 1j * rng.standard_normal((dim, n))
    return DetectorConfig.from_vectors(z)


def load_detectors(path) -> DetectorConfig:
    with open(path) as fh:
        return DetectorConfig.from_dict(json.load(fh))


def save_detectors(det: DetectorConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(det.to_dict(), fh)


@dataclass(frozen=True)
class InterferometerOutput:
    rho_ab_tilde: DensityMatrix
    rho_a_tilde: np.ndarray
    rho_a: np.ndarray          # pre-interaction marginal
    q: np.ndarray              # path populations (rho_A)_ii
    purity_d: float
    purity_a: float
    purity_ab: float
    detectors: DetectorConfig

    @property
    def n(self) -> int:
        return self.detectors.n


def apply_detectors(rho, det: DetectorConfig) -> InterferometerOutput:
    """Couple path i to detector state |d_i> and trace the detector out.

    Block (i, k) of rho_AB is multiplied by <d_k|d_i>; the detector purity
    follows from the populations and overlaps alone.
    """
    rho = as_density(rho)
    if rho.dim_a != det.n:
        raise ContractError(f"state has {rho.dim_a} paths but {det.n} detectors were given")
    n, m = rho.dims
    tilde = kernels.schur_blocks(rho.matrix, det.gram, n, m)
    rho_ab_tilde = DensityMatrix(n, m, tilde)
    rho_a = rho.reduced_a()
    q = np.clip(np.real(np.diag(rho_a)), 0.0, None)
    rho_a_tilde = rho_a * det.gram
    return InterferometerOutput(
        rho_ab_tilde=rho_ab_tilde,
        rho_a_tilde=rho_a_tilde,
        rho_a=rho_a,
        q=q,
        purity_d=kernels.weighted_gram_purity(q, det.gram),
        purity_a=purity(rho_a_tilde),
        purity_ab=purity(tilde),
        detectors=det,
    )


def build_tripartite(rho, det: DetectorConfig) -> DensityMatrix:
    """Explicit A (x) B (x) D state sum_ik |i><k| (x) B_ik (x) |d_i><d_k|.

    Returned as a DensityMatrix with ``dim_b = m * r`` (memory times detector
    dimension r = Gram rank). Used as an independent check of
    :func:`apply_detectors`.
    """
    rho = as_density(rho)
    if rho.dim_a != det.n:
        raise ContractError(f"state has {rho.dim_a} paths but {det.n} detectors were given")
    n, m = rho.dims
    v = det.vectors  # r x n, column i is |d_i>
    r = v.shape[0]
    t = rho.matrix.reshape(n, m, n, m)
    big = np.einsum("ijkl,ai,bk->ijaklb", t, v, v.conj())
    return DensityMatrix(n, m * r, big.reshape(n * m * r, n * m * r))


def tripartite_marginals(tri: DensityMatrix, n: int, m: int):
    """(rho_AB, rho_A, rho_D) of a state built by :func:`build_tripartite`."""
    r = tri.dim_b // m
    rho_ab = partial_trace(tri.matrix, (n * m, r), keep="A")
    rho_a = partial_trace(tri.matrix, (n, m * r), keep="A")
    rho_d = partial_trace(tri.matrix, (n * m, r), keep="B")
    return rho_ab, rho_a, rho_d
