"""Scalar wave, mixedness and entanglement measures in their n-path normalizations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import TOL
from .qmat import ContractError, as_hermitian, eig_hermitian, purity
from .states import DensityMatrix, PureBipartite


def _dim(rho, n):
    d = np.asarray(rho).shape[0]
    if n is None:
        return d
    if n != d:
        raise ContractError(f"matrix dimension {d} does not match n={n}")
    return n


def coherence_factor(n: int) -> float:
    """2(n-1)/n^2, the common prefactor of V^2, M and E^2."""
    return 2.0 * (n - 1) / n**2


def visibility_v2(rho, n: int | None = None) -> float:
    """Squared visibility 2(n-1)/n^2 * sum_{i != k} |rho_ik|^2 (normalized l2 coherence)."""
    n = _dim(rho, n)
    return coherence_factor(n) * kernels.offdiag_sq_sum(np.asarray(rho, dtype=np.complex128))


def visibility_v(rho, n: int | None = None) -> float:
    return float(np.sqrt(visibility_v2(rho, n)))


def visibility_x(rho, n: int | None = None) -> float:
    """l1 coherence divided by n."""
    n = _dim(rho, n)
    return kernels.offdiag_abs_sum(np.asarray(rho, dtype=np.complex128)) / n


def mixedness_from_purity(pur: float, n: int) -> float:
    return coherence_factor(n) * (1.0 - pur)


def mixedness(rho, n: int | None = None) -> float:
    """Normalized linear entropy 2(n-1)/n^2 (1 - Tr rho^2)."""
    n = _dim(rho, n)
    return mixedness_from_purity(purity(rho), n)


def max_mixedness(n: int) -> float:
    return 2.0 * (n - 1) ** 2 / n**3


def concurrence_pure(psi: PureBipartite) -> float:
    """sqrt(2 (1 - Tr rho_A^2))."""
    pur = purity(psi.reduced_a())
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - pur))))


_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def concurrence_wootters(rho) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the descending square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy). With rho = W W^dag they are the singular
    values of W^T (sy x sy) W, which stay accurate when rho is (nearly)
    rank-deficient. Eigenvalues of rho at rounding level are set to zero.
    """
    if isinstance(rho, PureBipartite):
        rho = rho.to_density()
    if isinstance(rho, DensityMatrix):
        if rho.dims != (2, 2):
            raise ContractError(f"Wootters concurrence needs a 2x2 system, got {rho.dims}")
        mat = rho.matrix
    else:
        mat = as_hermitian(rho)
        if mat.shape != (4, 4):
            raise ContractError(f"Wootters concurrence needs a 4x4 matrix, got {mat.shape}")
    w, v = eig_hermitian(mat)
    if w[-1] < -TOL.wootters_clip:
        raise ContractError(f"state has eigenvalue {w[-1]:.3e} < 0")
    w = np.where(w > 64 * np.finfo(float).eps * max(w[0], 0.0), w, 0.0)
    factor = v * np.sqrt(w)
    s = np.linalg.svd(factor.T @ _SYSY @ factor, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def entanglement_e(c: float, n: int) -> float:
    """Normalized concurrence sqrt(n-1)/n * C."""
    if c < 0:
        raise ContractError("concurrence must be nonnegative")
    return float(np.sqrt(n - 1) / n * c)


def entanglement_pure_formula(psi: PureBipartite, n: int | None = None) -> float:
    """E^2 of a pure state from path weights and branch overlaps."""
    n = psi.n if n is None else n
    p = psi.path_weights
    u = psi.branches
    ov = np.abs(u.conj().T @ u) ** 2
    return coherence_factor(n) * (1.0 - float(p @ ov @ p))


def entanglement_e2(state, n: int | None = None) -> float:
    """E^2 for a pure state of any size or a two-qubit mixed state."""
    if isinstance(state, PureBipartite):
        n = state.n if n is None else n
        return entanglement_e(concurrence_pure(state), n) ** 2
    if isinstance(state, DensityMatrix) and state.dims == (2, 2):
        return entanglement_e(concurrence_wootters(state), 2) ** 2
    dims = getattr(state, "dims", None)
    raise ContractError(f"entanglement unavailable for mixed state with dims {dims}; "
                        "only pure states or 2x2 mixed states are supported")


_RANGES = {
    "V": lambda n: (0.0, 1.0),
    "V2": lambda n: (0.0, 1.0),
    "X": lambda n: (0.0, 1.0),
    "X2": lambda n: (0.0, 1.0),
    "E": lambda n: (0.0, 1.0),
    "E2": lambda n: (0.0, 1.0),
    "M": lambda n: (0.0, max_mixedness(n)),
    "purity": lambda n: (1.0 / n, 1.0),
}


@dataclass(frozen=True)
class MeasureValue:
    name: str
    value: float
    n: int

    def in_range(self, tol: float = 1e-10) -> bool:
        lo, hi = _RANGES[self.name](self.n)
        return lo - tol <= self.value <= hi + tol
