# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: small dense Lyapunov solve, two-mode determinants, Wigner mesh."""
import numpy as np

from libc.math cimport exp, fabs, sqrt, M_PI


cdef int _gauss_solve(double[:, ::1] M, double[::1] b) noexcept nogil:
    # In-place Gaussian elimination with partial pivoting; solution left in b.
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t i, j, k, piv
    cdef double big, tmp, f
    for k in range(n):
        piv = k
        big = fabs(M[k, k])
        for i in range(k + 1, n):
            if fabs(M[i, k]) > big:
                big = fabs(M[i, k])
                piv = i
        if big == 0.0:
            return -1
        if piv != k:
            for j in range(k, n):
                tmp = M[k, j]
                M[k, j] = M[piv, j]
                M[piv, j] = tmp
            tmp = b[k]
            b[k] = b[piv]
            b[piv] = tmp
        for i in range(k + 1, n):
            f = M[i, k] / M[k, k]
            if f != 0.0:
                for j in range(k + 1, n):
                    M[i, j] -= f * M[k, j]
                b[i] -= f * b[k]
    for i in range(n - 1, -1, -1):
        tmp = b[i]
        for j in range(i + 1, n):
            tmp -= M[i, j] * b[j]
        b[i] = tmp / M[i, i]
    return 0


def lyapunov(A, D):
    """Solve ``A V + V A^T = -D`` through the Kronecker-sum linear system."""
    cdef double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] d = np.ascontiguousarray(D, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = n * n
    cdef Py_ssize_t i, j, k
    M_arr = np.zeros((m, m))
    b_arr = np.empty(m)
    cdef double[:, ::1] M = M_arr
    cdef double[::1] b = b_arr
    cdef int status
    with nogil:
        # row (i, j) of vec(V): sum_k A[i,k] V[k,j] + V[i,k] A[j,k]
        for i in range(n):
            for j in range(n):
                b[i * n + j] = -d[i, j]
                for k in range(n):
                    M[i * n + j, k * n + j] += a[i, k]
                    M[i * n + j, i * n + k] += a[j, k]
        status = _gauss_solve(M, b)
    if status != 0:
        raise np.linalg.LinAlgError("Singular matrix")
    V = b_arr.reshape(n, n)
    return 0.5 * (V + V.T)


cdef inline double _det2(double a, double b, double c, double d) noexcept nogil:
    return a * d - b * c


def lognegativity_terms(V):
    """Return ``(Sigma, det V)`` for a 4x4 two-mode covariance matrix."""
    cdef double[:, ::1] v = np.ascontiguousarray(V, dtype=np.float64)
    cdef double sigma, det4
    cdef double[:, ::1] w
    sigma = (_det2(v[0, 0], v[0, 1], v[1, 0], v[1, 1])
             + _det2(v[2, 2], v[2, 3], v[3, 2], v[3, 3])
             - 2.0 * _det2(v[0, 2], v[0, 3], v[1, 2], v[1, 3]))
    # Laplace expansion along the first two rows.
    det4 = (_det2(v[0, 0], v[0, 1], v[1, 0], v[1, 1]) * _det2(v[2, 2], v[2, 3], v[3, 2], v[3, 3])
            - _det2(v[0, 0], v[0, 2], v[1, 0], v[1, 2]) * _det2(v[2, 1], v[2, 3], v[3, 1], v[3, 3])
            + _det2(v[0, 0], v[0, 3], v[1, 0], v[1, 3]) * _det2(v[2, 1], v[2, 2], v[3, 1], v[3, 2])
            + _det2(v[0, 1], v[0, 2], v[1, 1], v[1, 2]) * _det2(v[2, 0], v[2, 3], v[3, 0], v[3, 3])
            - _det2(v[0, 1], v[0, 3], v[1, 1], v[1, 3]) * _det2(v[2, 0], v[2, 2], v[3, 0], v[3, 2])
            + _det2(v[0, 2], v[0, 3], v[1, 2], v[1, 3]) * _det2(v[2, 0], v[2, 1], v[3, 0], v[3, 1]))
    return sigma, det4


def wigner_grid(V, q, p):
    """Evaluate ``exp(-u V^-1 u^T) / (pi sqrt(det V))`` on the ``q x p`` mesh."""
    cdef double[:, ::1] v = np.ascontiguousarray(V, dtype=np.float64)
    cdef double[::1] qs = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[::1] ps = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t nq = qs.shape[0], npts = ps.shape[0], i, j
    cdef double det = v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0]
    cdef double i00 = v[1, 1] / det
    cdef double i01 = -0.5 * (v[0, 1] + v[1, 0]) / det
    cdef double i11 = v[0, 0] / det
    cdef double norm = 1.0 / (M_PI * sqrt(det))
    cdef double x, y
    out_arr = np.empty((nq, npts))
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(nq):
            x = qs[i]
            for j in range(npts):
                y = ps[j]
                out[i, j] = norm * exp(-(i00 * x * x + 2.0 * i01 * x * y + i11 * y * y))
    return out_arr
