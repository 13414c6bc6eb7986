"""Vectorized numpy kernels. Reference path when numba is disabled."""
import numpy as np

NAME = "numpy"


def schur_blocks(rho, gram, n, m):
    """Multiply block (i, k) of an (n*m)x(n*m) matrix by gram[i, k]."""
    t = rho.reshape(n, m, n, m) * gram[:, None, :, None]
    return t.reshape(n * m, n * m)


def offdiag_sq_sum(mat):
    a2 = np.abs(mat) ** 2
    return float(a2.sum() - np.trace(a2))


def offdiag_abs_sum(mat):
    a = np.abs(mat)
    return float(a.sum() - np.trace(a))


def weighted_gram_purity(q, gram):
    """sum_{i,k} q_i q_k |G_ik|^2, the purity of sum_i q_i |d_i><d_i|."""
    return float(q @ (np.abs(gram) ** 2) @ q)


def pair_trace_norm_sum(q, gram):
    """sum over ordered pairs i != k of ||q_i d_i - q_k d_k||_1 in closed form."""
    qi = q[:, None]
    qk = q[None, :]
    arg = ((qi + qk) / 2.0) ** 2 - qi * qk * np.abs(gram) ** 2
    np.fill_diagonal(arg, 0.0)
    return float(2.0 * np.sqrt(np.clip(arg, 0.0, None)).sum())


def pair_trace_norm_sum_batch(q, gram):
    """Row-wise :func:`pair_trace_norm_sum` over a leading batch axis."""
    qi = q[:, :, None]
    qk = q[:, None, :]
    arg = ((qi + qk) / 2.0) ** 2 - qi * qk * np.abs(gram) ** 2
    idx = np.arange(q.shape[1])
    arg[:, idx, idx] = 0.0
    return 2.0 * np.sqrt(np.clip(arg, 0.0, None)).sum(axis=(1, 2))


def _inv_sqrt_psd(y, eps):
    w, v = np.linalg.eigh(y)
    keep = w > eps
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return (v * inv) @ v.conj().T


def _success(vecs, q, povm):
    # sum_j q_j <d_j|P_j|d_j>
    vals = np.einsum("aj,jab,bj->j", vecs.conj(), povm, vecs)
    return float(np.real(q @ vals))


def _jrf_step(vecs, q, povm, t, scale):
    r = vecs.shape[0]
    eye = np.eye(r, dtype=np.complex128)
    proj = np.einsum("aj,bj->jab", vecs, vecs.conj())
    a = t * q[:, None, None] * proj + (1.0 - t) * scale * eye
    apa = a @ povm @ a
    g = _inv_sqrt_psd(apa.sum(axis=0), 1e-14 * max(scale, 1e-300))
    new = g @ apa @ g
    new = 0.5 * (new + np.conj(np.transpose(new, (0, 2, 1))))
    deficit = eye - new.sum(axis=0)
    new[int(np.argmax(q))] += 0.5 * (deficit + deficit.conj().T)
    return new, _success(vecs, q, new)


def jrf_optimize(vecs, q, povm, max_iter, tol):
    """Damped fixed-point iteration for minimum-error discrimination of pure states.

    ``vecs`` holds the states as columns (r x n), ``povm`` is the (n, r, r)
    starting measurement. Each step maps P_j -> G A_j P_j A_j G with
    A_j = t q_j |d_j><d_j| + (1 - t) s I and G = (sum_j A_j P_j A_j)^(-1/2);
    t = 1 is the undamped update. A step that lowers the success value is
    rejected and retried with t halved; only an undamped step can signal
    convergence.

    Returns (povm, value, iterations, converged).
    """
    povm = np.array(povm, dtype=np.complex128)
    vecs = np.ascontiguousarray(vecs, dtype=np.complex128)
    q = np.asarray(q, dtype=np.float64)
    scale = float(q.max())
    value = _success(vecs, q, povm)
    t = 1.0
    it = 0
    while it < max_iter:
        it += 1
        step_t = t
        new, new_value = _jrf_step(vecs, q, povm, t, scale)
        if new_value < value - 1e-15:
            t *= 0.5
            if t < 1e-12:
                return povm, value, it, False
            continue
        delta = new_value - value
        povm, value = new, new_value
        t = min(1.0, 2.0 * t)
        if delta < tol and step_t == 1.0:
            return povm, value, it, True
    return povm, value, it, False
