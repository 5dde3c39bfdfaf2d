"""Gaussian-state toolkit.

Covariance matrices use quadratures ``X = (a + a^dag)/sqrt(2)`` and
``Y = i(a^dag - a)/sqrt(2)``, ordered ``(X_1, Y_1, X_2, Y_2, ...)``, with the
vacuum equal to ``I/2``. All functions are pure.
"""
import math

import numpy as np

from ._backend import kernels
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidCM,
    NonPositiveFrequency,
    NotStable,
    SingularCM,
)

HBAR = 1.054571817e-34
K_B = 1.380649e-23

STAB_REL = 1e-6
STAB_FLOOR = 1e-3  # rad/s
DISC_TOL = 1e-9


def vacuum(n_modes):
    return 0.5 * np.eye(2 * n_modes)


def stability_margin(A):
    """Threshold below which the largest real part counts as decaying."""
    A = np.asarray(A, dtype=float)
    return max(STAB_REL * float(np.max(np.abs(np.diag(A)))), STAB_FLOOR)


def is_stable(A):
    """Hurwitz test with a scale-aware margin.

    Returns
    -------
    stable : bool
        True when every eigenvalue has ``Re(lambda) < -eps``, where
        ``eps = max(1e-6 * max|A_ii|, 1e-3 rad/s)``.
    max_real_part : float
        The largest real part over the spectrum.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"drift matrix must be square, got shape {A.shape}")
    max_re = float(np.max(np.linalg.eigvals(A).real))
    return max_re < -stability_margin(A), max_re


def solve_lyapunov(A, D, check=True):
    """Steady-state covariance matrix from ``A V + V A^T = -D``.

    Parameters
    ----------
    A : (n, n) array
        Drift matrix; must be Hurwitz.
    D : (n, n) array
        Symmetric diffusion matrix.
    check : bool
        Run the stability test first. Callers that already did can skip it.

    Raises
    ------
    NotStable
        If the drift matrix fails :func:`is_stable`.
    DimensionMismatch
        If the shapes disagree.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or D.shape != A.shape:
        raise DimensionMismatch(f"A {A.shape} and D {D.shape} must be square and equal")
    if check:
        stable, max_re = is_stable(A)
        if not stable:
            raise NotStable(max_re)
    try:
        return kernels.lyapunov(A, D)
    except np.linalg.LinAlgError as exc:
        raise NotStable(float(np.max(np.linalg.eigvals(A).real)), str(exc)) from exc


def extract_modes(V, modes):
    """Reduced covariance matrix of the selected modes (0-based indices).

    Tracing out a Gaussian mode amounts to deleting its rows and columns.
    """
    V = np.asarray(V, dtype=float)
    n_modes = V.shape[0] // 2
    modes = list(modes)
    if len(set(modes)) != len(modes):
        raise IndexOutOfRange(f"mode indices must be distinct, got {modes}")
    for k in modes:
        if not 0 <= k < n_modes:
            raise IndexOutOfRange(f"mode {k} outside 0..{n_modes - 1}")
    idx = [2 * k + j for k in modes for j in (0, 1)]
    return V[np.ix_(idx, idx)].copy()


def log_negativity(V4):
    """Logarithmic negativity of a two-mode state.

    ``E_N = max(0, -ln(2 eta))`` where ``eta`` is the smallest symplectic
    eigenvalue of the partially transposed matrix,

        eta = 2^-1/2 [Sigma - (Sigma^2 - 4 det V)^1/2]^1/2,
        Sigma = det V_a + det V_m - 2 det V_am.
    """
    V4 = np.asarray(V4, dtype=float)
    if V4.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 matrix, got {V4.shape}")
    sigma, det4 = kernels.lognegativity_terms(V4)
    disc = sigma * sigma - 4.0 * det4
    if disc < -DISC_TOL * max(1.0, sigma * sigma):
        raise InvalidCM(f"Sigma^2 - 4 det V = {disc:.3g} < 0")
    if sigma - math.sqrt(max(disc, 0.0)) < -DISC_TOL * max(1.0, abs(sigma)):
        raise InvalidCM("partially transposed symplectic eigenvalue is not real")
    return max(0.0, -math.log(2.0 * _eta_minus(V4)))


_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])
_OMEGA2 = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _eta_minus(V4):
    # Same eta as the Sigma/det closed form, but read off as the smallest
    # singular value of L^T Omega L (L L^T = partially transposed V). The closed
    # form loses ~sqrt(eps) when the two symplectic eigenvalues coincide.
    try:
        L = np.linalg.cholesky(_FLIP @ V4 @ _FLIP)
    except np.linalg.LinAlgError as exc:
        raise InvalidCM("covariance matrix is not positive definite") from exc
    return float(np.linalg.svd(L.T @ _OMEGA2 @ L, compute_uv=False)[-1])


def _check_cm2(V):
    V = np.asarray(V, dtype=float)
    if V.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {V.shape}")
    det = V[0, 0] * V[1, 1] - V[0, 1] * V[1, 0]
    if not det > 0.0 or V[0, 0] <= 0.0:
        raise SingularCM(f"covariance matrix is not positive definite (det = {det:.3g})")
    return V, det


def wigner(V, q, p):
    """Single-mode Wigner density ``exp(-u V^-1 u^T) / (pi sqrt(det V))``.

    Note the exponent carries no factor 1/2. Accepts scalars or arrays
    (broadcast together).
    """
    V, det = _check_cm2(V)
    Vi = np.linalg.inv(V)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    quad = Vi[0, 0] * q * q + (Vi[0, 1] + Vi[1, 0]) * q * p + Vi[1, 1] * p * p
    out = np.exp(-quad) / (np.pi * np.sqrt(det))
    return float(out) if out.ndim == 0 else out


def wigner_mesh(V, q, p):
    """Wigner density on the mesh ``q x p``; ``W[i, j]`` is at ``(q[i], p[j])``."""
    V, _ = _check_cm2(V)
    return kernels.wigner_grid(V, q, p)


def overlap_fidelity(V1, V2):
    """Fidelity ``pi * integral W1 W2 d^2 alpha`` of two zero-mean states.

    For the Wigner convention above the integral has the closed form
    ``1 / sqrt(det(V1 + V2))``.
    """
    V1, _ = _check_cm2(V1)
    V2, _ = _check_cm2(V2)
    return float(1.0 / np.sqrt(np.linalg.det(V1 + V2)))


def thermal_occupation(omega, T):
    """Bose-Einstein occupation ``1 / (exp(hbar omega / k_B T) - 1)``."""
    if not omega > 0:
        raise NonPositiveFrequency(f"omega must be > 0, got {omega}")
    if T < 0:
        raise ValueError(f"temperature must be >= 0, got {T}")
    if T == 0:
        return 0.0
    x = HBAR * omega / (K_B * T)
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)
