"""Left- and right-hand sides of every duality and triality relation.

Each evaluator returns a :class:`ComplementarityReport` carrying the
assembled sides plus every intermediate quantity, so a failing check can be
traced to the measure that caused it. Path distinguishability uses the
closed-form upper bound on the optimal success probability unless
``oracle=True``, in which case the numerical POVM optimum is used (at n = 2
the exact Helstrom value is used for the identities).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .discrimination import Ensemble, ps_helstrom_n2, ps_optimize, ps_upper_bound
from .interferometer import DetectorConfig, InterferometerOutput, apply_detectors
from .measures import (coherence_factor, entanglement_e, concurrence_pure, concurrence_wootters,
                       mixedness, mixedness_from_purity, visibility_v2, visibility_x)
from .qmat import ContractError
from .states import PureBipartite, as_density


class RelationId(str, enum.Enum):
    TH1_DUALITY = "th1"
    EQ13_NO_MEMORY = "eq13"
    COR1_N2_IDENTITY = "cor1"
    TH2_MIXEDNESS = "th2"
    COR2_N2_IDENTITY = "cor2"
    TH3_ENTANGLEMENT = "th3"
    EQ1_PRIOR = "eq1"
    EQ2_PRIOR_MEMORY = "eq2"
    LIMIT_PD_V = "limit-v"
    LIMIT_PD_E = "limit-e"


COMPONENT_KEYS = ("ps", "pd2", "v2", "x2", "m_a", "m_d", "e2", "purity_a", "purity_d", "purity_ab")


@dataclass(frozen=True)
class ComplementarityReport:
    relation: RelationId
    n: int
    lhs: float
    rhs: float
    is_identity: bool
    components: dict = field(default_factory=dict)
    tol: float = TOL.relation

    @property
    def residual(self) -> float:
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> bool:
        if self.is_identity:
            return abs(self.residual) <= self.tol
        return self.residual >= -self.tol

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "n": self.n,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "satisfied": self.satisfied,
            "is_identity": self.is_identity,
            "components": {k: self.components.get(k) for k in COMPONENT_KEYS},
        }


def _ceiling(n: int) -> float:
    return (1.0 - 1.0 / n) ** 2


class _Context:
    """Quantities shared by all relations for one (state, detectors) pair."""

    def __init__(self, state, det: DetectorConfig, oracle: bool, exact_n2: bool = False):
        self.state = state
        self.out: InterferometerOutput = apply_detectors(state, det)
        self.n = n = det.n
        self.ens = Ensemble.from_output(self.out)
        if exact_n2 and n == 2:
            self.ps = ps_helstrom_n2(self.ens)
        elif oracle:
            self.ps = ps_optimize(self.ens).value
        else:
            self.ps = ps_upper_bound(self.ens)
        self.pd2 = (self.ps - 1.0 / n) ** 2
        self.v2 = visibility_v2(self.out.rho_a_tilde, n)

    def components(self, **extra) -> dict:
        o = self.out
        comp = {
            "ps": self.ps,
            "pd2": self.pd2,
            "v2": self.v2,
            "purity_a": o.purity_a,
            "purity_d": o.purity_d,
            "purity_ab": o.purity_ab,
        }
        comp.update(extra)
        return comp


def eval_th1(state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """(P_s - 1/n)^2 + V^2 <= (1 - 1/n)^2 - 2(n-1)/n^2 (Tr rho_D^2 - Tr rho_A^2)."""
    c = _Context(state, det, oracle)
    n = c.n
    rhs = _ceiling(n) - coherence_factor(n) * (c.out.purity_d - c.out.purity_a)
    return ComplementarityReport(RelationId.TH1_DUALITY, n, c.pd2 + c.v2, rhs, False, c.components())


def eval_eq13(state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """No-memory duality (P_s - 1/n)^2 + V^2 <= (1 - 1/n)^2 for a pure particle state."""
    rho = as_density(state)
    if rho.dim_b != 1:
        raise ContractError("the no-memory relation needs dim_b = 1")
    if abs(rho.purity() - 1.0) > 1e-10:
        raise ContractError("the no-memory relation needs a pure input state")
    c = _Context(rho, det, oracle)
    return ComplementarityReport(RelationId.EQ13_NO_MEMORY, c.n, c.pd2 + c.v2, _ceiling(c.n),
                                 False, c.components())


def eval_cor1(state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """Two-path identity (P_s - 1/2)^2 + V^2 = 1/4 - 1/2 (Tr rho_D^2 - Tr rho_A^2)."""
    if det.n != 2:
        raise ContractError(f"the two-path identity needs n = 2, got {det.n}")
    c = _Context(state, det, oracle, exact_n2=True)
    rhs = 0.25 - 0.5 * (c.out.purity_d - c.out.purity_a)
    return ComplementarityReport(RelationId.COR1_N2_IDENTITY, 2, c.pd2 + c.v2, rhs, True,
                                 c.components())


def eval_th2(state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """(P_s - 1/n)^2 + V^2 + M(rho_A) <= (1 - 1/n)^2 + M(rho_D)."""
    c = _Context(state, det, oracle)
    n = c.n
    m_a = mixedness(c.out.rho_a_tilde, n)
    m_d = mixedness_from_purity(c.out.purity_d, n)
    return ComplementarityReport(RelationId.TH2_MIXEDNESS, n, c.pd2 + c.v2 + m_a,
                                 _ceiling(n) + m_d, False, c.components(m_a=m_a, m_d=m_d))


def eval_cor2(state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """(P_s - 1/2)^2 + V^2/2 + M(rho_A)/2 = 1/4 when |<d_1|d_2>|^2 = 1/2."""
    if det.n != 2:
        raise ContractError(f"the two-path triality identity needs n = 2, got {det.n}")
    c_d = abs(det.gram[0, 1]) ** 2
    if abs(c_d - 0.5) > 1e-12:
        raise ContractError(f"the triality identity needs |<d1|d2>|^2 = 1/2, got {c_d!r}")
    c = _Context(state, det, oracle, exact_n2=True)
    m_a = mixedness(c.out.rho_a_tilde, 2)
    lhs = c.pd2 + 0.5 * c.v2 + 0.5 * m_a
    return ComplementarityReport(RelationId.COR2_N2_IDENTITY, 2, lhs, 0.25, True,
                                 c.components(m_a=m_a))


def as_pure(state) -> PureBipartite | None:
    """The state as a PureBipartite if it has unit purity, else None."""
    if isinstance(state, PureBipartite):
        return state
    if abs(state.purity() - 1.0) > 1e-10:
        return None
    w, v = np.linalg.eigh(state.matrix)
    vec = v[:, -1]
    return PureBipartite(vec.reshape(state.dim_a, state.dim_b) / np.linalg.norm(vec))


def entanglement_squared(state, n: int) -> float:
    """E(rho_AB)^2 of the pre-interaction state: pure at any size, mixed only at 2x2."""
    pure = as_pure(state)
    if pure is not None:
        return entanglement_e(concurrence_pure(pure), n) ** 2
    if state.dims == (2, 2):
        return entanglement_e(concurrence_wootters(state), n) ** 2
    raise ContractError(f"entanglement unavailable for a mixed state with dims {state.dims}")


def eval_th3(state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """(P_s - 1/n)^2 + V^2 + E(rho_AB)^2 <= (n^2 - 1)/n^2 - 2(n-1)/n^2 Tr(rho_AB~^2).

    E is taken before the detector interaction, the purity after it.
    """
    e2 = entanglement_squared(state, det.n)
    c = _Context(state, det, oracle)
    n = c.n
    rhs = (n * n - 1.0) / (n * n) - coherence_factor(n) * c.out.purity_ab
    return ComplementarityReport(RelationId.TH3_ENTANGLEMENT, n, c.pd2 + c.v2 + e2, rhs, False,
                                 c.components(e2=e2))


def _branch_overlaps(psi: PureBipartite) -> np.ndarray:
    u = psi.branches
    return np.abs(u.conj().T @ u) ** 2


def eval_limits(psi: PureBipartite, det: DetectorConfig, which, *,
                oracle: bool = False) -> ComplementarityReport:
    """Limiting dualities of the entanglement triality for pure inputs.

    ``LIMIT_PD_V`` needs all branch overlaps |<u_j|u_i>|^2 = 1 (product state),
    ``LIMIT_PD_E`` needs them all 0 (orthonormal branches). Branches with zero
    weight are ignored. At n = 2 both become identities.
    """
    which = RelationId(which)
    if not isinstance(psi, PureBipartite):
        raise ContractError("limiting dualities need a pure input state")
    live = np.flatnonzero(psi.path_weights > 1e-14)
    ov = _branch_overlaps(psi)[np.ix_(live, live)]
    off = ov[~np.eye(live.size, dtype=bool)]
    n = det.n
    if which is RelationId.LIMIT_PD_V:
        if off.size and np.max(np.abs(off - 1.0)) > 1e-9:
            raise ContractError("visibility limit needs identical memory branches")
        c = _Context(psi, det, oracle, exact_n2=True)
        return ComplementarityReport(which, n, c.pd2 + c.v2, _ceiling(n), n == 2, c.components())
    if which is RelationId.LIMIT_PD_E:
        if off.size and np.max(off) > 1e-9:
            raise ContractError("entanglement limit needs orthonormal memory branches")
        e2 = entanglement_e(concurrence_pure(psi), n) ** 2
        c = _Context(psi, det, oracle, exact_n2=True)
        rhs = (n * n - 1.0) / (n * n) - coherence_factor(n) * c.out.purity_ab
        return ComplementarityReport(which, n, c.pd2 + e2, rhs, n == 2, c.components(e2=e2))
    raise ContractError(f"{which.value} is not a limiting relation")


def eval_priors(state, det: DetectorConfig, *, oracle: bool = False):
    """Reports for the two earlier l1-coherence dualities (without and with memory).

    Purities in the memory-assisted version are taken after the interaction.
    """
    c = _Context(state, det, oracle)
    n = c.n
    x2 = visibility_x(c.out.rho_a_tilde, n) ** 2
    comp = c.components(x2=x2)
    eq1 = ComplementarityReport(RelationId.EQ1_PRIOR, n, c.pd2 + x2, _ceiling(n), False, comp)
    rhs2 = _ceiling(n) + coherence_factor(n) * (c.out.purity_a - c.out.purity_ab)
    eq2 = ComplementarityReport(RelationId.EQ2_PRIOR_MEMORY, n, c.pd2 + x2, rhs2, False, comp)
    return eq1, eq2


def evaluate(relation, state, det: DetectorConfig, *, oracle: bool = False) -> ComplementarityReport:
    """Dispatch on a :class:`RelationId` (or its string value)."""
    rel = RelationId(relation)
    if rel is RelationId.EQ1_PRIOR:
        return eval_priors(state, det, oracle=oracle)[0]
    if rel is RelationId.EQ2_PRIOR_MEMORY:
        return eval_priors(state, det, oracle=oracle)[1]
    if rel in (RelationId.LIMIT_PD_V, RelationId.LIMIT_PD_E):
        return eval_limits(state, det, rel, oracle=oracle)
    return _EVALUATORS[rel](state, det, oracle=oracle)


_EVALUATORS = {
    RelationId.TH1_DUALITY: eval_th1,
    RelationId.EQ13_NO_MEMORY: eval_eq13,
    RelationId.COR1_N2_IDENTITY: eval_cor1,
    RelationId.TH2_MIXEDNESS: eval_th2,
    RelationId.COR2_N2_IDENTITY: eval_cor2,
    RelationId.TH3_ENTANGLEMENT: eval_th3,
}
