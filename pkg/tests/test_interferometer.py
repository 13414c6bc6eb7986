import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from duality_lab.interferometer import (DetectorConfig, apply_detectors, build_tripartite,
                                        identical_detectors, load_detectors, orthogonal_detectors,
                                        random_detectors, save_detectors, tripartite_marginals,
                                        two_path, uniform_overlap)
from duality_lab.qmat import ContractError, partial_trace, purity
from duality_lab.states import random_mixed, random_pure, werner

seeds = st.integers(0, 2**32 - 1)
dims = st.tuples(st.integers(2, 4), st.integers(1, 3))


def test_orthogonal_detectors_decohere():
    rho = random_mixed(3, 2, 4, 1)
    out = apply_detectors(rho, orthogonal_detectors(3))
    assert np.allclose(out.rho_a_tilde, np.diag(out.q), atol=1e-15)
    assert out.purity_d == pytest.approx(np.sum(out.q**2), abs=1e-14)


def test_identical_detectors_leave_marginal():
    rho = random_mixed(3, 2, 4, 2)
    out = apply_detectors(rho, identical_detectors(3))
    assert np.allclose(out.rho_a_tilde, rho.reduced_a(), atol=1e-14)
    assert np.allclose(out.rho_ab_tilde.matrix, rho.matrix, atol=1e-14)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.7, 1.0])
@pytest.mark.parametrize("x", [0.0, 0.4, 1.0])
def test_werner_purity(p, x):
    out = apply_detectors(werner(p), two_path(x))
    assert out.purity_ab == pytest.approx((1 + p**2) / 4 + p**2 * x**2 / 2, abs=1e-14)
    assert 0.75 - 0.5 * out.purity_ab == pytest.approx(5 / 8 - p**2 * (1 + 2 * x**2) / 8, abs=1e-14)


def test_schur_block_form():
    n, m = 3, 2
    rho = random_mixed(n, m, 6, 4)
    det = random_detectors(n, 5)
    out = apply_detectors(rho, det)
    a = rho.matrix.reshape(n, m, n, m)
    b = out.rho_ab_tilde.matrix.reshape(n, m, n, m)
    for i in range(n):
        for k in range(n):
            assert np.allclose(b[i, :, k, :], det.gram[i, k] * a[i, :, k, :], atol=1e-15)


def test_dimension_mismatch():
    with pytest.raises(ContractError):
        apply_detectors(random_mixed(2, 2, 2, 0), orthogonal_detectors(3))


def test_bell_tripartite_is_pure():
    tri = build_tripartite(werner(1.0), orthogonal_detectors(2))
    assert np.trace(tri.matrix).real == pytest.approx(1.0)
    assert tri.purity() == pytest.approx(1.0)


@given(seeds, dims)
def test_tripartite_oracle(seed, nm):
    n, m = nm
    rho = random_mixed(n, m, 1 + seed % (n * m), seed)
    det = random_detectors(n, (seed, 1))
    out = apply_detectors(rho, det)
    ab, a, d = tripartite_marginals(build_tripartite(rho, det), n, m)
    assert np.allclose(ab, out.rho_ab_tilde.matrix, atol=1e-10)
    assert np.allclose(a, out.rho_a_tilde, atol=1e-10)
    assert purity(d) == pytest.approx(out.purity_d, abs=1e-10)


@given(seeds, dims)
def test_output_invariants(seed, nm):
    n, m = nm
    rho = random_mixed(n, m, 1 + seed % (n * m), seed)
    out = apply_detectors(rho, random_detectors(n, (seed, 2)))
    assert out.q.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(partial_trace(out.rho_ab_tilde.matrix, (n, m)), out.rho_a_tilde, atol=1e-10)
    for pur, dim in ((out.purity_a, n), (out.purity_d, n), (out.purity_ab, n * m)):
        assert 1 / dim - 1e-10 <= pur <= 1 + 1e-10
    assert np.linalg.eigvalsh(out.rho_ab_tilde.matrix)[0] >= -1e-10
    # Schur product with a correlation matrix cannot raise purity
    assert out.purity_a <= purity(rho.reduced_a()) + 1e-10


@given(seeds, dims)
def test_pure_input_purities_match(seed, nm):
    n, m = nm
    out = apply_detectors(random_pure(n, m, seed), random_detectors(n, (seed, 3)))
    assert out.purity_ab == pytest.approx(out.purity_d, abs=1e-10)


class TestDetectorConfig:
    def test_uniform_overlap(self):
        det = uniform_overlap(4, 0.25)
        off = det.gram[~np.eye(4, dtype=bool)]
        assert np.allclose(np.abs(off) ** 2, 0.25)

    def test_uniform_overlap_range(self):
        with pytest.raises(ContractError):
            uniform_overlap(3, 1.5)

    def test_rejects_non_psd(self):
        with pytest.raises(ContractError):
            DetectorConfig(np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=complex))

    def test_rejects_diag(self):
        with pytest.raises(ContractError):
            DetectorConfig(np.diag([1.0, 0.5]))

    def test_vectors_reproduce_gram(self):
        det = random_detectors(5, 9)
        v = det.vectors
        assert np.allclose((v.conj().T @ v).T, det.gram, atol=1e-12)

    def test_json_roundtrip(self, tmp_path):
        det = random_detectors(3, 11)
        path = tmp_path / "d.json"
        save_detectors(det, path)
        assert set(json.loads(path.read_text())) == {"n", "gram_re", "gram_im"}
        assert np.array_equal(load_detectors(path).gram, det.gram)

    def test_random_dim_keyword(self):
        det = random_detectors(4, 0, dim=1)
        assert np.allclose(np.abs(det.gram), 1.0)
