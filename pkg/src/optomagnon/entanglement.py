"""Stationary magnon-photon entanglement and parameter sweeps."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UnknownParameter
from .gaussian import extract_modes, is_stable, log_negativity, solve_lyapunov
from .model import SystemParams, linearize

SWEEPABLE = ("Delta_a", "Delta_m", "T", "gamma_b", "G_a", "G_m")
THRESHOLD = 1e-5

CAVITY, MAGNON = 1, 2


@dataclass(frozen=True)
class EntanglementResult:
    E_N: float
    stable: bool
    max_real_eig: float
    V: np.ndarray | None = None
    G_a: complex = 0j
    G_m: complex = 0j
    nearly_real: bool = True


def stationary_entanglement(params: SystemParams) -> EntanglementResult:
    """Cavity-magnon logarithmic negativity in the steady state.

    An unstable drift matrix is reported with ``stable=False`` and ``E_N = 0``
    rather than raised.
    """
    lin = linearize(params)
    stable, max_re = is_stable(lin.A)
    if not stable:
        return EntanglementResult(0.0, False, max_re, None, lin.G_a, lin.G_m, lin.nearly_real)
    V = solve_lyapunov(lin.A, lin.D, check=False)
    E_N = log_negativity(extract_modes(V, (CAVITY, MAGNON)))
    return EntanglementResult(E_N, True, max_re, V, lin.G_a, lin.G_m, lin.nearly_real)


def _check_axis(name, values):
    if name not in SWEEPABLE:
        raise UnknownParameter(f"cannot sweep {name!r}; allowed: {', '.join(SWEEPABLE)}")
    values = [float(v) for v in values]
    if not values:
        raise ValueError(f"axis {name!r} has no values")
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"axis {name!r} has non-finite values")
    return name, tuple(values)


@dataclass(frozen=True)
class SweepSpec:
    axis1: tuple[str, Sequence[float]]
    base: SystemParams
    axis2: tuple[str, Sequence[float]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "axis1", _check_axis(*self.axis1))
        if self.axis2 is not None:
            object.__setattr__(self, "axis2", _check_axis(*self.axis2))

    @property
    def names(self):
        return [ax[0] for ax in self.axes]

    @property
    def axes(self):
        return [self.axis1] if self.axis2 is None else [self.axis1, self.axis2]

    def points(self):
        """Grid points in row-major order (last axis fastest)."""
        return list(itertools.product(*(ax[1] for ax in self.axes)))


@dataclass
class SweepResult:
    names: list[str]
    rows: list[tuple] = field(default_factory=list)

    @property
    def columns(self):
        return [*self.names, "E_N", "stable", "max_real_eig"]

    def values(self, column):
        i = self.columns.index(column)
        return np.array([row[i] for row in self.rows])

    def grid(self, column="E_N"):
        """Reshape a column onto the sweep grid."""
        shape = [len(np.unique(self.values(n))) for n in self.names]
        return self.values(column).reshape(shape)


def _evaluate(base, names, point):
    res = stationary_entanglement(base.replace(**dict(zip(names, point))))
    return (*point, res.E_N, res.stable, res.max_real_eig)


def sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate :func:`stationary_entanglement` over the sweep grid.

    Grid points are independent; with ``threads > 1`` they run in a thread
    pool but rows always come back in row-major order.
    """
    names = spec.names
    for name in names:
        if name in ("G_a", "G_m") and not spec.base.direct:
            raise UnknownParameter(f"{name!r} can only be swept with direct couplings")
    points = spec.points()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda pt: _evaluate(spec.base, names, pt), points))
    else:
        rows = [_evaluate(spec.base, names, pt) for pt in points]
    return SweepResult(names, rows)


def find_threshold(base: SystemParams, name: str, values, level=THRESHOLD, rtol=1e-9):
    """Locate where ``E_N`` first drops below ``level`` along one parameter.

    The sampled ``values`` (monotone) bracket the crossing; bisection refines it.
    Returns ``None`` when no crossing is bracketed.
    """
    _check_axis(name, values)

    def f(x):
        return stationary_entanglement(base.replace(**{name: x})).E_N - level

    vals = [float(v) for v in values]
    prev_x, prev_f = vals[0], f(vals[0])
    for x in vals[1:]:
        fx = f(x)
        if prev_f > 0.0 >= fx:
            lo, hi = prev_x, x
            while abs(hi - lo) > rtol * max(abs(lo), abs(hi)):
                mid = 0.5 * (lo + hi)
                if f(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_x, prev_f = x, fx
    return None
