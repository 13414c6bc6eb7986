import numpy as np
import pytest
from hypothesis import given, strategies as st

from duality_lab.measures import (MeasureValue, coherence_factor, concurrence_pure,
                                  concurrence_wootters, entanglement_e, entanglement_e2,
                                  entanglement_pure_formula, max_mixedness, mixedness,
                                  visibility_v, visibility_v2, visibility_x)
from duality_lab.qmat import ContractError, purity
from duality_lab.states import pure_from_branches, random_mixed, random_pure, werner

seeds = st.integers(0, 2**32 - 1)


def haar_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestCoherence:
    def test_diagonal(self):
        rho = np.diag([0.2, 0.3, 0.5])
        assert visibility_v2(rho) == 0
        assert visibility_x(rho) == 0

    def test_plus_state(self):
        plus = np.full((2, 2), 0.5)
        assert visibility_v2(plus) == pytest.approx(0.25)
        assert visibility_v(plus) == pytest.approx(0.5)
        assert visibility_x(plus) == pytest.approx(0.5)

    @given(seeds, st.integers(2, 6))
    def test_l1_dominates_l2(self, seed, n):
        rho = random_mixed(n, 1, 1 + seed % n, seed).matrix
        off = rho[~np.eye(n, dtype=bool)]
        assert n * visibility_x(rho) >= np.sqrt(np.sum(np.abs(off) ** 2)) - 1e-12

    @given(seeds, st.integers(2, 6))
    def test_ranges(self, seed, n):
        rho = random_mixed(n, 1, 1 + seed % n, seed).matrix
        for name, val in (("V2", visibility_v2(rho)), ("X", visibility_x(rho)),
                          ("M", mixedness(rho)), ("purity", purity(rho))):
            assert MeasureValue(name, val, n).in_range()


class TestMixedness:
    def test_pure(self):
        assert mixedness(np.diag([1.0, 0, 0])) == 0

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_maximally_mixed(self, n):
        assert mixedness(np.eye(n) / n) == pytest.approx(max_mixedness(n), abs=1e-15)
        assert max_mixedness(n) == pytest.approx(2 * (n - 1) ** 2 / n**3)

    @given(seeds, st.integers(2, 6))
    def test_purity_identity(self, seed, n):
        rho = random_mixed(n, 1, 1 + seed % n, seed).matrix
        f = coherence_factor(n)
        assert mixedness(rho) + f * purity(rho) == pytest.approx(f, abs=1e-12)


class TestConcurrence:
    def test_product(self):
        psi = pure_from_branches([0.5, 0.5], np.array([[1, 1], [0, 0]], dtype=complex))
        assert concurrence_pure(psi) == pytest.approx(0, abs=1e-7)

    def test_singlet(self):
        assert concurrence_wootters(werner(1.0)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 11))
    def test_werner(self, p):
        assert concurrence_wootters(werner(p)) == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-7)

    def test_maximally_mixed(self):
        assert concurrence_wootters(np.eye(4) / 4) == 0

    def test_wrong_dims(self):
        with pytest.raises(ContractError):
            concurrence_wootters(random_mixed(2, 3, 2, 0))

    @given(seeds)
    def test_pure_agrees(self, seed):
        psi = random_pure(2, 2, seed)
        assert concurrence_wootters(psi) == pytest.approx(concurrence_pure(psi), abs=1e-7)

    @given(seeds)
    def test_local_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_mixed(2, 2, 1 + seed % 4, seed).matrix
        u = np.kron(haar_unitary(rng, 2), haar_unitary(rng, 2))
        moved = u @ rho @ u.conj().T
        assert concurrence_wootters(moved) == pytest.approx(concurrence_wootters(rho), abs=1e-9)


class TestEntanglement:
    def test_scalar(self):
        assert entanglement_e(1.0, 2) == pytest.approx(0.5)
        assert entanglement_e(0.0, 5) == 0
        with pytest.raises(ContractError):
            entanglement_e(-0.1, 2)

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_maximum(self, n):
        psi = pure_from_branches(np.full(n, 1 / n), np.eye(n, dtype=complex))
        assert entanglement_pure_formula(psi) == pytest.approx(2 * (n - 1) ** 2 / n**3, abs=1e-14)
        assert entanglement_e2(psi) == pytest.approx(2 * (n - 1) ** 2 / n**3, abs=1e-12)

    def test_identical_branches(self):
        u = np.ones((3, 4), dtype=complex) / np.sqrt(3)
        psi = pure_from_branches(np.full(4, 0.25), u)
        assert entanglement_pure_formula(psi) == pytest.approx(0, abs=1e-14)

    @given(seeds, st.integers(2, 6), st.integers(1, 6))
    def test_formula_matches_concurrence(self, seed, n, m):
        psi = random_pure(n, m, seed)
        assert entanglement_pure_formula(psi) == pytest.approx(
            entanglement_e(concurrence_pure(psi), n) ** 2, abs=1e-10)

    def test_mixed_large_unsupported(self):
        with pytest.raises(ContractError):
            entanglement_e2(random_mixed(3, 2, 3, 0))
