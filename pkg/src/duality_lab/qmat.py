"""Small dense complex matrix algebra used by every other module."""
from __future__ import annotations

import numpy as np

from .config import TOL


class ContractError(ValueError):
    """Raised when an input violates a documented precondition."""


def as_cmatrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ContractError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix has non-finite entries")
    return a


def as_hermitian(m, tol: float = TOL.herm) -> np.ndarray:
    """Return (m + m^dagger)/2 after checking m is Hermitian entrywise within ``tol``."""
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise ContractError(f"Hermitian matrix must be square, got {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise ContractError(f"matrix is not Hermitian (max deviation {dev:.3e} > {tol:.0e})")
    return 0.5 * (a + a.conj().T)


def eig_hermitian(m):
    """Eigenvalues in descending order and matching orthonormal eigenvector columns."""
    h = as_hermitian(m)
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def trace_norm(m) -> float:
    w, _ = eig_hermitian(m)
    return float(np.abs(w).sum())


def purity(m) -> float:
    """Tr(m^2) for Hermitian m, computed as the squared Frobenius norm."""
    a = np.asarray(m)
    return float(np.real(np.vdot(a, a)))


def partial_trace(rho, dims, keep: str = "A") -> np.ndarray:
    """Reduced matrix of a bipartite operator on C^n (x) C^m.

    ``keep`` is ``"A"`` (trace out the second factor) or ``"B"``.
    """
    n, m = (int(d) for d in dims)
    a = np.asarray(rho, dtype=np.complex128)
    if a.shape != (n * m, n * m):
        raise ContractError(f"matrix shape {a.shape} does not match dims {(n, m)}")
    t = a.reshape(n, m, n, m)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ContractError(f"keep must be 'A' or 'B', got {keep!r}")


def gram_to_vectors(gram, tol: float = TOL.gram_psd) -> np.ndarray:
    """Unit vectors realizing a Gram matrix, as the columns of an r x n array.

    The convention is ``gram[i, k] = <v_k|v_i>``. ``r`` is the numerical rank,
    so identical or linearly dependent states are fine.
    """
    g = as_hermitian(gram)
    if np.max(np.abs(np.diag(g) - 1.0)) > TOL.gram_diag:
        raise ContractError("Gram matrix must have unit diagonal")
    # <v_k|v_i> = (V^dag V)[k, i], so V^dag V is the transpose of g.
    w, u = np.linalg.eigh(g.T)
    if w[0] < -tol:
        raise ContractError(f"Gram matrix is not PSD (min eigenvalue {w[0]:.3e})")
    scale = max(1.0, float(w[-1]))
    keep = w > 1e-12 * scale
    vecs = np.sqrt(w[keep])[:, None] * u[:, keep].conj().T
    # renormalize columns so clipped eigen-noise does not leak into the diagonal
    return vecs / np.linalg.norm(vecs, axis=0)


def vectors_to_gram(vecs) -> np.ndarray:
    """Inverse of :func:`gram_to_vectors`: ``G[i, k] = <v_k|v_i>``."""
    v = np.asarray(vecs, dtype=np.complex128)
    return (v.conj().T @ v).T


def ket(index: int, dim: int) -> np.ndarray:
    e = np.zeros(dim, dtype=np.complex128)
    e[index] = 1.0
    return e


def inv_sqrt_psd(m, rel_eps: float = 1e-12) -> np.ndarray:
    """Pseudo-inverse square root of a PSD matrix, restricted to its support."""
    w, v = np.linalg.eigh(as_hermitian(m, tol=1e-9))
    cut = rel_eps * max(float(w[-1]), 1e-300)
    inv = np.zeros_like(w)
    inv[w > cut] = 1.0 / np.sqrt(w[w > cut])
    return (v * inv) @ v.conj().T
