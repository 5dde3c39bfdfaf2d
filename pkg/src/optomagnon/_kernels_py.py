"""Numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable. Signatures and
results match the extension.
"""
import numpy as np


def lyapunov(A, D):
    """Solve ``A V + V A^T = -D`` through the Kronecker-sum linear system."""
    A = np.ascontiguousarray(A, dtype=float)
    D = np.ascontiguousarray(D, dtype=float)
    n = A.shape[0]
    eye = np.eye(n)
    M = np.kron(A, eye) + np.kron(eye, A)
    V = np.linalg.solve(M, -D.ravel()).reshape(n, n)
    return 0.5 * (V + V.T)


def lognegativity_terms(V):
    """Return ``(Sigma, det V)`` for a 4x4 two-mode covariance matrix."""
    V = np.asarray(V, dtype=float)
    sigma = (np.linalg.det(V[:2, :2]) + np.linalg.det(V[2:, 2:])
             - 2.0 * np.linalg.det(V[:2, 2:]))
    return float(sigma), float(np.linalg.det(V))


def wigner_grid(V, q, p):
    """Evaluate ``exp(-u V^-1 u^T) / (pi sqrt(det V))`` on the ``q x p`` mesh."""
    V = np.asarray(V, dtype=float)
    det = V[0, 0] * V[1, 1] - V[0, 1] * V[1, 0]
    i00, i01, i11 = V[1, 1] / det, -0.5 * (V[0, 1] + V[1, 0]) / det, V[0, 0] / det
    Q, P = np.meshgrid(np.asarray(q, float), np.asarray(p, float), indexing="ij")
    quad = i00 * Q * Q + 2.0 * i01 * Q * P + i11 * P * P
    return np.exp(-quad) / (np.pi * np.sqrt(det))
