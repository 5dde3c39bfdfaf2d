"""Two-step optical readout of a squeezed magnon state.

Step 1: a red-detuned magnon drive swaps the magnon state onto the mechanics;
with the magnon fed by a squeezed bath the mechanical steady state inherits the
squeezing. Step 2: a weak red-detuned flattop optical pulse maps the mechanical
state onto the output temporal mode of the pulse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .gaussian import extract_modes, overlap_fidelity, solve_lyapunov, thermal_occupation, vacuum, wigner_mesh
from .model import SystemParams

MECHANICS, MAGNON = 0, 1


@dataclass(frozen=True)
class SqueezedBath:
    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.r}")

    @property
    def N(self):
        return math.sinh(self.r) ** 2

    @property
    def M(self):
        return math.sinh(self.r) * math.cosh(self.r)


@dataclass(frozen=True)
class PulseSpec:
    G_a: float
    duration: float
    kappa_a: float

    def __post_init__(self):
        if not self.duration >= 0:
            raise ValueError(f"pulse duration must be >= 0, got {self.duration}")
        if not self.kappa_a > 0:
            raise ValueError(f"kappa_a must be > 0, got {self.kappa_a}")

    @property
    def readout_rate(self):
        """Adiabatic readout rate ``G_a^2 / (2 kappa_a)``."""
        return self.G_a ** 2 / (2.0 * self.kappa_a)

    @property
    def weak_coupling(self):
        return abs(self.G_a) / self.kappa_a < 0.5


@dataclass(frozen=True)
class WignerGrid:
    q: np.ndarray
    p: np.ndarray
    W: np.ndarray  # W[i, j] at (q[i], p[j])
    norm: float

    def rows(self):
        """Flattened ``(q, p, W)`` triples, q outer, p inner."""
        Q, P = np.meshgrid(self.q, self.p, indexing="ij")
        return np.column_stack([Q.ravel(), P.ravel(), self.W.ravel()])


def wigner_grid(V, points=201, span_sigma=5.0) -> WignerGrid:
    """Sample the Wigner density on ``+-span_sigma`` standard deviations of each
    quadrature, so squeezed and anti-squeezed axes are resolved alike."""
    V = np.asarray(V, dtype=float)
    q_half = span_sigma * math.sqrt(float(V[0, 0]))
    p_half = span_sigma * math.sqrt(float(V[1, 1]))
    q = np.linspace(-q_half, q_half, points)
    p = np.linspace(-p_half, p_half, points)
    W = wigner_mesh(V, q, p)
    norm = float(trapezoid(trapezoid(W, p, axis=1), q))
    return WignerGrid(q, p, W, norm)


def initial_magnon_cm(r):
    """Squeezed vacuum of the magnon, ``diag(e^{2r}, e^{-2r}) / 2``.

    The orientation (Y squeezed) matches the squeezed bath with real positive
    ``M``, which amplifies the X quadrature noise.
    """
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    return np.diag([math.exp(2.0 * r) / 2.0, math.exp(-2.0 * r) / 2.0])


def build_R(G_m, kappa_m, gamma_b):
    """Drift matrix of the beam-splitter magnon-phonon dynamics, order ``(q, p, X_m, Y_m)``."""
    g = G_m / 2.0
    return np.array([
        [-gamma_b / 2.0, 0.0, -g, 0.0],
        [0.0, -gamma_b / 2.0, 0.0, -g],
        [g, 0.0, -kappa_m / 2.0, 0.0],
        [0.0, g, 0.0, -kappa_m / 2.0],
    ])


def build_Z(bath: SqueezedBath, N_b, gamma_b, kappa_m):
    N, M = bath.N, bath.M
    Z = np.zeros((4, 4))
    Z[0, 0] = Z[1, 1] = gamma_b * (N_b + 0.5)
    Z[2, 2] = kappa_m / 2.0 * (2.0 * N + 1.0 + 2.0 * M)
    Z[3, 3] = kappa_m / 2.0 * (2.0 * N + 1.0 - 2.0 * M)
    # off-diagonal i*kappa_m/2*(M* - M) vanishes for real M
    return Z


@dataclass(frozen=True)
class SwapResult:
    V_mb: np.ndarray
    V_b: np.ndarray
    fidelity: float
    weak_drive: bool


def magnon_to_phonon(params: SystemParams, bath: SqueezedBath, G_m=None) -> SwapResult:
    """Steady mechanical state under the magnon-phonon state swap.

    ``G_m`` defaults to the direct coupling in ``params``. The fidelity compares
    the mechanical state with the initial squeezed magnon state.
    """
    if G_m is None:
        if not params.direct:
            raise ValueError("magnon_to_phonon needs a direct G_m (or pass G_m explicitly)")
        G_m = params.drive.G_m
    N_b = thermal_occupation(params.omega_b, params.T)
    R = build_R(G_m, params.kappa_m, params.gamma_b)
    Z = build_Z(bath, N_b, params.gamma_b, params.kappa_m)
    V_mb = solve_lyapunov(R, Z)
    V_b = extract_modes(V_mb, [MECHANICS])
    F = overlap_fidelity(initial_magnon_cm(bath.r), V_b)
    return SwapResult(V_mb, V_b, F, abs(G_m) < 0.1 * params.omega_b)


@dataclass(frozen=True)
class ReadoutResult:
    S: float
    V_out: np.ndarray
    weak_coupling: bool


def pulse_readout(V_b0, pulse: PulseSpec) -> ReadoutResult:
    """Output-mode covariance ``S V_b(0) + (1 - S) V_in`` with vacuum input.

    ``S = 1 - exp(-2 G t)`` with ``G = G_a^2 / (2 kappa_a)``.
    """
    S = -math.expm1(-2.0 * pulse.readout_rate * pulse.duration)
    V_out = S * np.asarray(V_b0, dtype=float) + (1.0 - S) * vacuum(1)
    return ReadoutResult(S, V_out, abs(pulse.G_a) / pulse.kappa_a <= 0.3)


@dataclass(frozen=True)
class FullReadout:
    F1: float
    S: float
    F_total: float
    V_m0: np.ndarray
    V_b: np.ndarray
    V_out: np.ndarray
    grids: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)


def full_readout(params: SystemParams, bath: SqueezedBath, pulse: PulseSpec,
                 points=201, span_sigma=5.0, G_m=None) -> FullReadout:
    """Magnon -> phonon -> pulse chain with Wigner grids of the three states."""
    swap = magnon_to_phonon(params, bath, G_m=G_m)
    # The magnons decay before the pulse while the mechanics barely moves.
    readout = pulse_readout(swap.V_b, pulse)
    V_m0 = initial_magnon_cm(bath.r)
    F_total = overlap_fidelity(V_m0, readout.V_out)
    grids = {}
    if points:
        grids = {
            "magnon": wigner_grid(V_m0, points, span_sigma),
            "mechanical": wigner_grid(swap.V_b, points, span_sigma),
            "output": wigner_grid(readout.V_out, points, span_sigma),
        }
    flags = {"weak_drive": swap.weak_drive, "weak_coupling": readout.weak_coupling}
    return FullReadout(swap.fidelity, readout.S, F_total, V_m0, swap.V_b, readout.V_out, grids, flags)
