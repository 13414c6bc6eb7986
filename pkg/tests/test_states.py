import json

import numpy as np
import pytest

from duality_lab.measures import concurrence_wootters
from duality_lab.qmat import ContractError, partial_trace, purity
from duality_lab.states import (DensityMatrix, PureBipartite, example1_state, load_state,
                                random_mixed, random_pure, save_state, threepath_example_state,
                                werner)


def assert_density(rho: DensityMatrix):
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.eigvalsh(rho.matrix)[0] >= -1e-10
    assert np.allclose(rho.matrix, rho.matrix.conj().T)


class TestRandomPure:
    def test_deterministic(self):
        a = random_pure(2, 2, 5)
        b = random_pure(2, 2, 5)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_different_seeds(self):
        assert not np.allclose(random_pure(3, 2, 1).amplitudes, random_pure(3, 2, 2).amplitudes)

    @pytest.mark.parametrize("n,m", [(2, 1), (2, 2), (3, 4), (5, 2)])
    def test_marginal_purity_range(self, n, m):
        for s in range(20):
            pur = purity(random_pure(n, m, s).reduced_a())
            assert 1 / n - 1e-12 <= pur <= 1 + 1e-12

    def test_haar_moment(self):
        # mean marginal purity of a Haar state on C^2 x C^2 is (2+2)/(4+1)
        vals = [purity(random_pure(2, 2, (99, s)).reduced_a()) for s in range(10_000)]
        assert np.mean(vals) == pytest.approx(4 / 5, abs=0.02)

    def test_too_few_paths(self):
        with pytest.raises(ContractError):
            random_pure(1, 2, 0)

    def test_diagonal_of_marginal_is_path_weights(self):
        psi = random_pure(4, 3, 8)
        rho_a = partial_trace(psi.to_density().matrix, (4, 3))
        assert np.allclose(np.diag(rho_a).real, psi.path_weights, atol=1e-12)


class TestRandomMixed:
    def test_rank_one_is_pure(self):
        assert random_mixed(3, 2, 1, 0).purity() == pytest.approx(1.0, abs=1e-10)

    def test_full_rank(self):
        for s in range(10):
            rho = random_mixed(2, 3, 6, s)
            assert np.linalg.eigvalsh(rho.matrix)[0] > 0

    @pytest.mark.parametrize("rank", [1, 2, 5, 8])
    def test_invariants(self, rank):
        assert_density(random_mixed(2, 4, rank, rank))

    @pytest.mark.parametrize("rank", [0, 7])
    def test_rank_range(self, rank):
        with pytest.raises(ContractError):
            random_mixed(2, 3, rank, 0)


class TestWerner:
    def test_endpoints(self):
        assert np.allclose(werner(0).matrix, np.eye(4) / 4)
        assert werner(1).purity() == pytest.approx(1.0)

    def test_marginal(self):
        for p in (0, 0.3, 1):
            assert np.allclose(werner(p).reduced_a(), np.eye(2) / 2)

    def test_concurrence_three_quarters(self):
        assert concurrence_wootters(werner(0.75)) == pytest.approx(0.625, abs=1e-12)

    def test_range(self):
        with pytest.raises(ContractError):
            werner(1.2)


class TestExample1:
    def branch_overlap(self, psi):
        u = psi.branches
        return abs(np.vdot(u[:, 0], u[:, 1])) ** 2

    @pytest.mark.parametrize("c_u", [0.0, 0.3, 0.5, 1.0])
    def test_overlap(self, c_u):
        assert self.branch_overlap(example1_state(0.4, c_u, phase=0.7)) == pytest.approx(c_u, abs=1e-12)

    def test_orthogonal_branches_entanglement(self):
        from duality_lab.measures import entanglement_pure_formula
        p = 0.3
        assert entanglement_pure_formula(example1_state(p, 0.0)) == pytest.approx(p * (1 - p))

    def test_product(self):
        from duality_lab.measures import concurrence_pure
        assert concurrence_pure(example1_state(0.3, 1.0)) == pytest.approx(0.0, abs=1e-7)

    def test_half_half(self):
        from duality_lab.measures import entanglement_pure_formula
        assert entanglement_pure_formula(example1_state(0.5, 0.5)) == pytest.approx(0.125)


class TestThreePath:
    def test_product_endpoint(self):
        psi = threepath_example_state(0, 0)
        assert abs(psi.amplitudes[2, 2]) == pytest.approx(1.0)
        assert psi.path_weights[2] == pytest.approx(1.0)

    def test_norm(self):
        psi = threepath_example_state(1, 1)
        assert np.sum(np.abs(psi.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("p,q", [(0.2, 0.9), (1, 1), (0.5, 0.0)])
    def test_coherence_entry(self, p, q):
        assert psi_a12(p, q) == pytest.approx(np.sqrt(p * q) / 3, abs=1e-15)


def psi_a12(p, q):
    return threepath_example_state(p, q).reduced_a()[0, 1].real


class TestValidationAndJson:
    def test_rejects_bad_trace(self):
        with pytest.raises(ContractError):
            DensityMatrix(2, 1, np.eye(2))

    def test_rejects_non_psd(self):
        with pytest.raises(ContractError):
            DensityMatrix(2, 1, np.diag([1.5, -0.5]))

    def test_rejects_unnormalized_pure(self):
        with pytest.raises(ContractError):
            PureBipartite(np.ones((2, 2)))

    def test_immutable(self):
        rho = werner(0.5)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1

    def test_roundtrip(self, tmp_path):
        rho = random_mixed(3, 2, 4, 3)
        path = tmp_path / "s.json"
        save_state(rho, path)
        obj = json.loads(path.read_text())
        assert set(obj) == {"dim_a", "dim_b", "re", "im"}
        back = load_state(path)
        assert back.dims == (3, 2)
        assert np.array_equal(back.matrix, rho.matrix)

    def test_loader_validates(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim_a": 2, "dim_b": 1, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]}))
        with pytest.raises(ContractError):
            load_state(path)

    def test_zero_weight_branch(self):
        psi = example1_state(1.0, 0.3)
        assert psi.path_weights[1] == 0
        assert np.allclose(psi.branches[:, 1], [1, 0])
