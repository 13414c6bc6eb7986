"""Loop kernels compiled with numba. Same signatures as ``_numpy``."""
import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _schur_blocks(rho, gram, n, m):
    out = np.empty_like(rho)
    for i in range(n):
        for k in range(n):
            g = gram[i, k]
            for j in range(m):
                for l in range(m):
                    out[i * m + j, k * m + l] = g * rho[i * m + j, k * m + l]
    return out


def schur_blocks(rho, gram, n, m):
    """Multiply block (i, k) of an (n*m)x(n*m) matrix by gram[i, k]."""
    return _schur_blocks(np.ascontiguousarray(rho, dtype=np.complex128),
                         np.ascontiguousarray(gram, dtype=np.complex128), n, m)


@njit(cache=True)
def _offdiag_sq_sum(mat):
    s = 0.0
    d = mat.shape[0]
    for i in range(d):
        for k in range(d):
            if i != k:
                z = mat[i, k]
                s += z.real * z.real + z.imag * z.imag
    return s


def offdiag_sq_sum(mat):
    return float(_offdiag_sq_sum(np.ascontiguousarray(mat, dtype=np.complex128)))


@njit(cache=True)
def _offdiag_abs_sum(mat):
    s = 0.0
    d = mat.shape[0]
    for i in range(d):
        for k in range(d):
            if i != k:
                s += abs(mat[i, k])
    return s


def offdiag_abs_sum(mat):
    return float(_offdiag_abs_sum(np.ascontiguousarray(mat, dtype=np.complex128)))


@njit(cache=True)
def _weighted_gram_purity(q, gram):
    s = 0.0
    n = q.shape[0]
    for i in range(n):
        for k in range(n):
            z = gram[i, k]
            s += q[i] * q[k] * (z.real * z.real + z.imag * z.imag)
    return s


def weighted_gram_purity(q, gram):
    """sum_{i,k} q_i q_k |G_ik|^2, the purity of sum_i q_i |d_i><d_i|."""
    return float(_weighted_gram_purity(np.ascontiguousarray(q, dtype=np.float64),
                                       np.ascontiguousarray(gram, dtype=np.complex128)))


@njit(cache=True)
def _pair_trace_norm_sum(q, gram):
    s = 0.0
    n = q.shape[0]
    for i in range(n):
        for k in range(n):
            if i == k:
                continue
            z = gram[i, k]
            h = 0.5 * (q[i] + q[k])
            arg = h * h - q[i] * q[k] * (z.real * z.real + z.imag * z.imag)
            if arg > 0.0:
                s += 2.0 * np.sqrt(arg)
    return s


def pair_trace_norm_sum(q, gram):
    """sum over ordered pairs i != k of ||q_i d_i - q_k d_k||_1 in closed form."""
    return float(_pair_trace_norm_sum(np.ascontiguousarray(q, dtype=np.float64),
                                      np.ascontiguousarray(gram, dtype=np.complex128)))


@njit(cache=True)
def _pair_trace_norm_sum_batch(q, gram):
    out = np.empty(q.shape[0])
    for b in range(q.shape[0]):
        out[b] = _pair_trace_norm_sum(q[b], gram[b])
    return out


def pair_trace_norm_sum_batch(q, gram):
    """Row-wise :func:`pair_trace_norm_sum` over a leading batch axis."""
    return _pair_trace_norm_sum_batch(np.ascontiguousarray(q, dtype=np.float64),
                                      np.ascontiguousarray(gram, dtype=np.complex128))


@njit(cache=True)
def _success(vecs, q, povm):
    r, n = vecs.shape
    s = 0.0
    for j in range(n):
        acc = 0.0 + 0.0j
        for a in range(r):
            for b in range(r):
                acc += np.conj(vecs[a, j]) * povm[j, a, b] * vecs[b, j]
        s += q[j] * acc.real
    return s


@njit(cache=True)
def _jrf_step(vecs, q, povm, t, scale):
    r, n = vecs.shape
    apa = np.empty_like(povm)
    total = np.zeros((r, r), dtype=np.complex128)
    for j in range(n):
        a = np.zeros((r, r), dtype=np.complex128)
        for x in range(r):
            for y in range(r):
                a[x, y] = t * q[j] * vecs[x, j] * np.conj(vecs[y, j])
            a[x, x] += (1.0 - t) * scale
        apa[j] = a @ povm[j] @ a
        total += apa[j]
    w, v = np.linalg.eigh(total)
    eps = 1e-14 * max(scale, 1e-300)
    g = np.zeros((r, r), dtype=np.complex128)
    for c in range(r):
        if w[c] > eps:
            f = 1.0 / np.sqrt(w[c])
            for x in range(r):
                for y in range(r):
                    g[x, y] += f * v[x, c] * np.conj(v[y, c])
    new = np.empty_like(povm)
    summed = np.zeros((r, r), dtype=np.complex128)
    for j in range(n):
        p = g @ apa[j] @ g
        p = 0.5 * (p + p.conj().T)
        new[j] = p
        summed += p
    deficit = np.eye(r, dtype=np.complex128) - summed
    jmax = np.argmax(q)
    new[jmax] += 0.5 * (deficit + deficit.conj().T)
    return new, _success(vecs, q, new)


@njit(cache=True)
def _jrf_optimize(vecs, q, povm, max_iter, tol):
    scale = q.max()
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
        povm = new
        value = new_value
        t = min(1.0, 2.0 * t)
        if delta < tol and step_t == 1.0:
            return povm, value, it, True
    return povm, value, it, False


def jrf_optimize(vecs, q, povm, max_iter, tol):
    """Damped fixed-point iteration for minimum-error discrimination of pure states.

    Compiled twin of ``_numpy.jrf_optimize``; returns (povm, value, iterations, converged).
    """
    povm, value, it, ok = _jrf_optimize(
        np.ascontiguousarray(vecs, dtype=np.complex128),
        np.ascontiguousarray(q, dtype=np.float64),
        np.array(povm, dtype=np.complex128),
        int(max_iter), float(tol))
    return povm, float(value), int(it), bool(ok)
