"""Linearized opto-magnomechanical model.

Three modes: mechanics ``(q, p)``, optical cavity ``(X_a, Y_a)`` and magnon
``(X_m, Y_m)``, in that order. All angular frequencies and rates are in rad/s.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NoConvergence, NonPositiveInput
from .gaussian import HBAR, thermal_occupation

C_LIGHT = 299792458.0
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DirectCouplings:
    """Effective couplings given directly (possibly signed)."""

    G_a: float
    G_m: float


@dataclass(frozen=True)
class DriveFields:
    """Laser power (W) and magnon Rabi frequency (rad/s)."""

    P_L: float
    Omega: float


Drive = Union[DirectCouplings, DriveFields]


@dataclass(frozen=True)
class SystemParams:
    omega_m: float
    omega_b: float
    lambda_opt: float
    kappa_a: float
    kappa_m: float
    gamma_b: float
    g_a: float
    g_m: float
    T: float
    Delta_a: float
    Delta_m: float
    drive: Drive = DirectCouplings(0.0, 0.0)

    def __post_init__(self):
        for name in ("omega_m", "omega_b", "lambda_opt", "kappa_a", "kappa_m", "gamma_b"):
            if not getattr(self, name) > 0:
                raise NonPositiveInput(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("g_a", "g_m"):
            if getattr(self, name) < 0:
                raise NonPositiveInput(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.T < 0:
            raise NonPositiveInput(f"T must be >= 0, got {self.T}")

    @property
    def resolved_sideband(self) -> bool:
        return self.omega_b > self.kappa_a and self.omega_b > self.kappa_m

    @property
    def direct(self) -> bool:
        return isinstance(self.drive, DirectCouplings)

    def replace(self, **changes) -> "SystemParams":
        """Copy with fields changed; ``G_a``/``G_m``/``P_L``/``Omega`` reach into the drive."""
        drive_changes = {k: changes.pop(k) for k in ("G_a", "G_m", "P_L", "Omega") if k in changes}
        if drive_changes:
            drive = changes.get("drive", self.drive)
            try:
                changes["drive"] = dataclasses.replace(drive, **drive_changes)
            except TypeError as exc:
                raise ValueError(
                    f"cannot set {sorted(drive_changes)} on drive of type {type(drive).__name__}"
                ) from exc
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SteadyAmplitudes:
    a_avg: complex
    m_avg: complex
    q_avg: float
    Delta_a_eff: float
    Delta_m_eff: float
    iterations: int = 0


@dataclass(frozen=True)
class EffectiveCouplings:
    G_a: complex
    G_m: complex
    nearly_real: bool

    @property
    def abs_G_a(self) -> float:
        return abs(self.G_a)

    @property
    def abs_G_m(self) -> float:
        return abs(self.G_m)


def laser_amplitude(P_L, lambda_opt, kappa_a):
    """Cavity drive rate ``E = sqrt(kappa_a P_L / (hbar omega_L))`` in rad/s."""
    if P_L < 0:
        raise NonPositiveInput(f"P_L must be >= 0, got {P_L}")
    if not lambda_opt > 0 or not kappa_a > 0:
        raise NonPositiveInput("lambda_opt and kappa_a must be > 0")
    omega_L = TWO_PI * C_LIGHT / lambda_opt
    return math.sqrt(kappa_a * P_L / (HBAR * omega_L))


def _amplitudes(params: SystemParams, E, Omega, q):
    d_a = params.Delta_a - params.g_a * q
    d_m = params.Delta_m + params.g_m * q
    a = E / complex(params.kappa_a / 2.0, d_a)
    m = Omega / complex(params.kappa_m / 2.0, d_m)
    return a, m, d_a, d_m


def _q_map(params: SystemParams, E, Omega, q):
    a, m, _, _ = _amplitudes(params, E, Omega, q)
    return (params.g_a * abs(a) ** 2 - params.g_m * abs(m) ** 2) / params.omega_b


def steady_amplitudes(params: SystemParams, E, Omega, beta=0.5, max_iter=10_000, rtol=1e-10):
    """Self-consistent classical steady state of the driven system.

    Damped Picard iteration on the mechanical displacement,
    ``q <- (1 - beta) q + beta f(q)``, with detunings shifted by the
    radiation-pressure and magnetostrictive forces.

    Raises
    ------
    NoConvergence
        After ``max_iter`` steps; usually a sign of bistability.
    """
    q = 0.0
    for it in range(1, max_iter + 1):
        fq = _q_map(params, E, Omega, q)
        q_new = (1.0 - beta) * q + beta * fq
        step = abs(q_new - q)
        q = q_new
        if step <= rtol * max(abs(q), 1e-300) or step == 0.0:
            break
    else:
        raise NoConvergence(q, abs(_q_map(params, E, Omega, q) - q), max_iter)
    a, m, d_a, d_m = _amplitudes(params, E, Omega, q)
    return SteadyAmplitudes(a, m, q, d_a, d_m, it)


def effective_couplings(params: SystemParams, amps: SteadyAmplitudes) -> EffectiveCouplings:
    """``G_a = i sqrt(2) g_a <a>`` and ``G_m = -i sqrt(2) g_m <m>``.

    ``nearly_real`` holds when both steady amplitudes are close to purely
    imaginary (``|Re <x>| < 0.1 |<x>|``), i.e. both couplings are close to real.
    """
    G_a = 1j * math.sqrt(2.0) * params.g_a * amps.a_avg
    G_m = -1j * math.sqrt(2.0) * params.g_m * amps.m_avg

    def _real(G):
        return G == 0 or abs(G.imag) < 0.1 * abs(G)

    return EffectiveCouplings(G_a, G_m, _real(G_a) and _real(G_m))


def drive_for_couplings(params: SystemParams, G_a, G_m, Delta_a_eff, Delta_m_eff):
    """Invert the steady state for target effective couplings and detunings.

    Returns ``(P_L, Omega, Delta_a, Delta_m)``: drive strengths and the bare
    detunings that reproduce ``|G_a|``, ``|G_m|`` at the requested effective
    detunings.
    """
    a_abs = abs(G_a) / (math.sqrt(2.0) * params.g_a) if G_a else 0.0
    m_abs = abs(G_m) / (math.sqrt(2.0) * params.g_m) if G_m else 0.0
    E = a_abs * math.hypot(Delta_a_eff, params.kappa_a / 2.0)
    Omega = m_abs * math.hypot(Delta_m_eff, params.kappa_m / 2.0)
    omega_L = TWO_PI * C_LIGHT / params.lambda_opt
    P_L = E * E * HBAR * omega_L / params.kappa_a
    q = (params.g_a * a_abs ** 2 - params.g_m * m_abs ** 2) / params.omega_b
    return P_L, Omega, Delta_a_eff + params.g_a * q, Delta_m_eff - params.g_m * q


def build_drift_6(G_a, G_m, deltas, params: SystemParams):
    """6x6 drift matrix of the linearized fluctuations.

    Real couplings give the familiar matrix; complex couplings use the general
    quadrature equations (``Re G`` and ``Im G`` enter separately).
    """
    d_a, d_m = deltas
    G_a = complex(G_a)
    G_m = complex(G_m)
    ka2 = params.kappa_a / 2.0
    km2 = params.kappa_m / 2.0
    wb = params.omega_b
    A = np.zeros((6, 6))
    A[0, 1] = wb
    A[1, 0] = -wb
    A[1, 1] = -params.gamma_b
    A[1, 2] = G_a.imag
    A[1, 3] = -G_a.real
    A[1, 4] = G_m.imag
    A[1, 5] = -G_m.real
    A[2, 0] = G_a.real
    A[2, 2] = -ka2
    A[2, 3] = d_a
    A[3, 0] = G_a.imag
    A[3, 2] = -d_a
    A[3, 3] = -ka2
    A[4, 0] = G_m.real
    A[4, 4] = -km2
    A[4, 5] = d_m
    A[5, 0] = G_m.imag
    A[5, 4] = -d_m
    A[5, 5] = -km2
    return A


def build_diffusion_6(params: SystemParams):
    """Diagonal diffusion matrix; the optical bath is vacuum."""
    N_b = thermal_occupation(params.omega_b, params.T)
    N_m = thermal_occupation(params.omega_m, params.T)
    return np.diag([
        0.0,
        2.0 * params.gamma_b * (N_b + 0.5),
        params.kappa_a / 2.0,
        params.kappa_a / 2.0,
        params.kappa_m * (N_m + 0.5),
        params.kappa_m * (N_m + 0.5),
    ])


@dataclass(frozen=True)
class LinearizedSystem:
    A: np.ndarray
    D: np.ndarray
    G_a: complex
    G_m: complex
    Delta_a_eff: float
    Delta_m_eff: float
    amplitudes: SteadyAmplitudes | None = None
    nearly_real: bool = True


def linearize(params: SystemParams) -> LinearizedSystem:
    """Drift and diffusion matrices for either drive specification.

    Direct couplings skip the classical steady state and read the detunings as
    effective ones. Drive fields go through :func:`steady_amplitudes`.
    """
    D = build_diffusion_6(params)
    if params.direct:
        G_a, G_m = params.drive.G_a, params.drive.G_m
        deltas = (params.Delta_a, params.Delta_m)
        A = build_drift_6(G_a, G_m, deltas, params)
        return LinearizedSystem(A, D, complex(G_a), complex(G_m), *deltas)
    E = laser_amplitude(params.drive.P_L, params.lambda_opt, params.kappa_a)
    amps = steady_amplitudes(params, E, params.drive.Omega)
    G = effective_couplings(params, amps)
    deltas = (amps.Delta_a_eff, amps.Delta_m_eff)
    A = build_drift_6(G.G_a, G.G_m, deltas, params)
    return LinearizedSystem(A, D, G.G_a, G.G_m, *deltas, amplitudes=amps, nearly_real=G.nearly_real)


def reference_params(**overrides) -> SystemParams:
    """Parameter set of the stationary-entanglement study at the optimal detunings."""
    wb = TWO_PI * 40e6
    base = SystemParams(
        omega_m=TWO_PI * 5e9,
        omega_b=wb,
        lambda_opt=1064e-9,
        kappa_a=TWO_PI * 2e6,
        kappa_m=TWO_PI * 3e6,
        gamma_b=TWO_PI * 10.0,
        g_a=TWO_PI * 1e3,
        g_m=TWO_PI * 10.0,
        T=0.01,
        Delta_a=wb,
        Delta_m=-wb,
        drive=DirectCouplings(TWO_PI * 4e6, TWO_PI * 1e6),
    )
    return base.replace(**overrides) if overrides else base
