"""Linearized Gaussian dynamics of an opto-magnomechanical system."""
from ._backend import BACKEND
from .entanglement import SweepResult, SweepSpec, find_threshold, stationary_entanglement, sweep
from .gaussian import (
    extract_modes,
    is_stable,
    log_negativity,
    overlap_fidelity,
    solve_lyapunov,
    thermal_occupation,
    wigner,
)
from .model import DirectCouplings, DriveFields, SystemParams, reference_params
from .transfer import PulseSpec, SqueezedBath, full_readout, magnon_to_phonon, pulse_readout

__version__ = "0.1.0"
