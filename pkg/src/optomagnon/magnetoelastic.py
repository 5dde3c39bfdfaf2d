"""Magnon-phonon coupling rates from a sampled mechanical eigenmode.

Derivatives are second-order finite differences (central inside, one-sided on
the faces); volume integrals use the trapezoid rule.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .errors import GridTooSmall, NonPositiveInput
from .gaussian import HBAR

AXES = "xyz"


@dataclass(frozen=True)
class MaterialParams:
    B1: float
    B2: float
    M_S: float
    gamma_gyro: float
    V_crystal: float

    def __post_init__(self):
        if not self.M_S > 0:
            raise NonPositiveInput(f"M_S must be > 0, got {self.M_S}")
        if not self.V_crystal > 0:
            raise NonPositiveInput(f"V_crystal must be > 0, got {self.V_crystal}")


@dataclass(frozen=True)
class DisplacementMode:
    """Dimensionless eigenmode ``chi`` on a uniform grid, plus its zero-point amplitude."""

    spacing: tuple[float, float, float]
    chi_x: np.ndarray
    chi_y: np.ndarray
    chi_z: np.ndarray
    d_zpm: float
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        shapes = {np.shape(self.chi_x), np.shape(self.chi_y), np.shape(self.chi_z)}
        if len(shapes) != 1 or len(next(iter(shapes))) != 3:
            raise ValueError(f"chi components must be 3-D arrays of one shape, got {shapes}")
        if not all(h > 0 for h in self.spacing):
            raise NonPositiveInput(f"grid spacings must be > 0, got {self.spacing}")

    @property
    def shape(self):
        return np.shape(self.chi_x)

    def coords(self):
        return [o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.shape)]

    @classmethod
    def from_function(cls, func, shape, lengths, d_zpm, origin=(0.0, 0.0, 0.0)):
        """Sample ``func(x, y, z) -> (chi_x, chi_y, chi_z)`` on a box.

        ``lengths`` are the box edges; ``shape`` the number of points per axis.
        """
        spacing = tuple(L / (n - 1) for L, n in zip(lengths, shape))
        axes = [o + h * np.arange(n) for o, h, n in zip(origin, spacing, shape)]
        X, Y, Z = np.meshgrid(*axes, indexing="ij")
        cx, cy, cz = (np.broadcast_to(np.asarray(c, float), X.shape).copy() for c in func(X, Y, Z))
        return cls(spacing, cx, cy, cz, d_zpm, tuple(origin))


def _grad(field, mode):
    if min(mode.shape) < 3:
        raise GridTooSmall(f"need at least 3 points per axis, got {mode.shape}")
    return np.gradient(field, *mode.spacing, edge_order=2)


def _jacobian(mode):
    """``J[i][j] = d chi_i / d l_j``."""
    return [_grad(c, mode) for c in (mode.chi_x, mode.chi_y, mode.chi_z)]


def strain(mode: DisplacementMode) -> dict[str, np.ndarray]:
    """Symmetric strain fields of ``chi``: keys ``xx, yy, zz, xy, xz, yz``."""
    J = _jacobian(mode)
    out = {}
    for i, j in ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)):
        out[AXES[i] + AXES[j]] = 0.5 * (J[i][j] + J[j][i])
    return out


def _integrate(field, mode):
    x, y, z = mode.coords()
    return float(trapezoid(trapezoid(trapezoid(field, z, axis=2), y, axis=1), x))


def g_dispersive(mode: DisplacementMode, mat: MaterialParams) -> float:
    """Dispersive rate ``(B1/M_S)(gamma/V) int d_zpm (eps_xx + eps_yy - 2 eps_zz)``."""
    e = strain(mode)
    integral = _integrate(e["xx"] + e["yy"] - 2.0 * e["zz"], mode)
    return mat.B1 / mat.M_S * mat.gamma_gyro / mat.V_crystal * mode.d_zpm * integral


def g_linear(mode: DisplacementMode, mat: MaterialParams) -> complex:
    """Linear (beam-splitter) rate for a phonon near resonance with the magnon."""
    e = strain(mode)
    re = _integrate(2.0 * e["xz"], mode)
    im = _integrate(2.0 * e["yz"], mode)
    pref = mat.B2 / mat.M_S * math.sqrt(mat.gamma_gyro * mat.M_S / (2.0 * HBAR * mat.V_crystal))
    return pref * mode.d_zpm * complex(re, im)


def g_parametric(mode: DisplacementMode, mat: MaterialParams) -> complex:
    """Magnon parametric-amplification rate for a phonon at twice the magnon frequency."""
    e = strain(mode)
    re = mat.B1 * _integrate(e["xx"] - e["yy"], mode)
    im = mat.B2 * _integrate(2.0 * e["xy"], mode)
    pref = mat.gamma_gyro / (2.0 * mat.V_crystal * mat.M_S)
    return pref * mode.d_zpm * complex(re, im)


def coupling_regime(omega_b, omega_m):
    """Advisory label for which coupling dominates.

    Thresholds on ``omega_b / omega_m`` are a tool convention: below 0.2 is
    dispersive, 0.8-1.2 linear, 1.8-2.2 parametric; anything else is mixed.
    """
    ratio = omega_b / omega_m
    if ratio < 0.2:
        return "dispersive"
    if 0.8 <= ratio <= 1.2:
        return "linear"
    if 1.8 <= ratio <= 2.2:
        return "parametric"
    return "mixed"


def _uniform_axis(values, name):
    u = np.unique(values)
    if len(u) < 2:
        return u, 1.0
    steps = np.diff(u)
    if not np.allclose(steps, steps[0], rtol=1e-6, atol=0.0):
        raise ValueError(f"{name} coordinates are not uniformly spaced")
    return u, float(steps[0])


def mode_from_csv(path, d_zpm) -> DisplacementMode:
    """Read ``x,y,z,chi_x,chi_y,chi_z`` rows (header required) on a full uniform grid."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"x", "y", "z", "chi_x", "chi_y", "chi_z"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        rows = [[float(r[k]) for k in ("x", "y", "z", "chi_x", "chi_y", "chi_z")] for r in reader]
    data = np.array(rows)
    axes = [_uniform_axis(data[:, k], AXES[k]) for k in range(3)]
    shape = tuple(len(u) for u, _ in axes)
    if data.shape[0] != math.prod(shape):
        raise ValueError(f"{path}: {data.shape[0]} rows do not fill a {shape} grid")
    idx = tuple(np.rint((data[:, k] - axes[k][0][0]) / axes[k][1]).astype(int) for k in range(3))
    chis = []
    for col in (3, 4, 5):
        arr = np.full(shape, np.nan)
        arr[idx] = data[:, col]
        if np.isnan(arr).any():
            raise ValueError(f"{path}: grid has holes")
        chis.append(arr)
    return DisplacementMode(tuple(h for _, h in axes), *chis, d_zpm=d_zpm,
                            origin=tuple(float(u[0]) for u, _ in axes))


def mode_from_json(path, d_zpm=None) -> DisplacementMode:
    """Structured form: ``{"spacing": [..], "origin": [..], "chi_x": nested 3-D list, ...}``.

    ``d_zpm`` in the file is used unless overridden.
    """
    with open(path) as fh:
        doc = json.load(fh)
    if d_zpm is None:
        d_zpm = doc["d_zpm"]
    chis = [np.asarray(doc[k], dtype=float) for k in ("chi_x", "chi_y", "chi_z")]
    return DisplacementMode(tuple(doc["spacing"]), *chis, d_zpm=d_zpm,
                            origin=tuple(doc.get("origin", (0.0, 0.0, 0.0))))
