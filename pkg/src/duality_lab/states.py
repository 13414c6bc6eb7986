"""Input states for the interferometer: random samplers and named families."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import TOL, make_rng
from .qmat import ContractError, as_hermitian, partial_trace, purity


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """Bipartite state of the particle (``dim_a`` paths) and memory (``dim_b``).

    ``dim_b == 1`` is the no-memory scenario.
    """
    dim_a: int
    dim_b: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ContractError("subsystem dimensions must be positive")
        d = self.dim_a * self.dim_b
        h = as_hermitian(self.matrix)
        if h.shape != (d, d):
            raise ContractError(f"matrix shape {h.shape} does not match {self.dim_a}x{self.dim_b}")
        tr = np.trace(h).real
        if abs(tr - 1.0) > TOL.trace:
            raise ContractError(f"trace {tr!r} is not 1")
        lo = np.linalg.eigvalsh(h)[0]
        if lo < -TOL.psd:
            raise ContractError(f"matrix is not PSD (min eigenvalue {lo:.3e})")
        object.__setattr__(self, "matrix", _freeze(h))

    @property
    def dims(self):
        return (self.dim_a, self.dim_b)

    def reduced_a(self) -> np.ndarray:
        return partial_trace(self.matrix, self.dims, keep="A")

    def reduced_b(self) -> np.ndarray:
        return partial_trace(self.matrix, self.dims, keep="B")

    def purity(self) -> float:
        return purity(self.matrix)

    def to_dict(self) -> dict:
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "DensityMatrix":
        try:
            mat = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
            return cls(int(obj["dim_a"]), int(obj["dim_b"]), mat)
        except KeyError as exc:
            raise ContractError(f"state JSON missing field {exc}") from None


@dataclass(frozen=True)
class PureBipartite:
    """Pure state sum_ij a_ij |i>_A |e_j>_B, stored as the n x m amplitude array."""
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.ndim != 2:
            raise ContractError("amplitudes must be an n x m array")
        norm = float(np.sum(np.abs(a) ** 2))
        if abs(norm - 1.0) > TOL.norm:
            raise ContractError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", _freeze(a))

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def m(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def path_weights(self) -> np.ndarray:
        """p_i = sum_j |a_ij|^2."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def branches(self) -> np.ndarray:
        """Memory states |u_i> as the columns of an m x n array.

        A path with p_i = 0 gets the first memory basis vector; it never
        contributes because every use is weighted by p_i.
        """
        p = self.path_weights
        u = np.zeros((self.m, self.n), dtype=np.complex128)
        for i in range(self.n):
            if p[i] > 0.0:
                u[:, i] = self.amplitudes[i] / np.sqrt(p[i])
            else:
                u[0, i] = 1.0
        return u

    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1).copy()

    def reduced_a(self) -> np.ndarray:
        a = self.amplitudes
        return a @ a.conj().T

    def to_density(self) -> DensityMatrix:
        v = self.vector()
        return DensityMatrix(self.n, self.m, np.outer(v, v.conj()))


def random_pure(n: int, m: int, seed) -> PureBipartite:
    """Haar-random pure state on C^n (x) C^m (normalized complex Gaussian)."""
    if n < 2:
        raise ContractError("need at least two paths")
    if m < 1:
        raise ContractError("memory dimension must be >= 1")
    rng = make_rng(seed)
    z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return PureBipartite(z / np.linalg.norm(z))


def random_mixed(n: int, m: int, rank: int, seed) -> DensityMatrix:
    """Ginibre state G G^dagger / Tr(G G^dagger) with G of shape (n*m) x rank."""
    d = n * m
    if n < 2:
        raise ContractError("need at least two paths")
    if not 1 <= rank <= d:
        raise ContractError(f"rank must lie in [1, {d}], got {rank}")
    rng = make_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return DensityMatrix(n, m, rho / np.trace(rho).real)


SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0)


def werner(p: float) -> DensityMatrix:
    """p |psi-><psi-| + (1 - p) I/4 on two qubits."""
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"Werner parameter must lie in [0, 1], got {p}")
    rho = p * np.outer(SINGLET, SINGLET.conj()) + (1.0 - p) / 4.0 * np.eye(4)
    return DensityMatrix(2, 2, rho)


def example1_state(p: float, c_u: float, phase: float = 0.0) -> PureBipartite:
    """sqrt(p)|1>|u1> + sqrt(1-p)|2>|u2> with |<u1|u2>|^2 = c_u.

    |u1> = |e1>, |u2> = e^{i phase} sqrt(c_u)|e1> + sqrt(1 - c_u)|e2>.
    """
    if not 0.0 <= p <= 1.0 or not 0.0 <= c_u <= 1.0:
        raise ContractError("p and c_u must lie in [0, 1]")
    u1 = np.array([1.0, 0.0], dtype=np.complex128)
    u2 = np.array([np.exp(1j * phase) * np.sqrt(c_u), np.sqrt(1.0 - c_u)])
    return PureBipartite(np.vstack([np.sqrt(p) * u1, np.sqrt(1.0 - p) * u2]))


def threepath_example_state(p: float, q: float) -> PureBipartite:
    """sqrt(p/3)|1>|e1> + sqrt(q/3)|2>|e1> + sqrt((3-p-q)/3)|3>|e3>."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ContractError("p and q must lie in [0, 1]")
    a = np.zeros((3, 3), dtype=np.complex128)
    a[0, 0] = np.sqrt(p / 3.0)
    a[1, 0] = np.sqrt(q / 3.0)
    a[2, 2] = np.sqrt((3.0 - p - q) / 3.0)
    return PureBipartite(a)


def pure_from_branches(p, branches) -> PureBipartite:
    """Build sum_i sqrt(p_i)|i>|u_i> from weights and memory columns."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(branches, dtype=np.complex128)
    u = u / np.linalg.norm(u, axis=0)
    return PureBipartite((np.sqrt(p)[:, None] * u.T))


def as_density(state) -> DensityMatrix:
    return state.to_density() if isinstance(state, PureBipartite) else state


def load_state(path) -> DensityMatrix:
    with open(path) as fh:
        return DensityMatrix.from_dict(json.load(fh))


def save_state(state, path) -> None:
    with open(path, "w") as fh:
        json.dump(as_density(state).to_dict(), fh)
