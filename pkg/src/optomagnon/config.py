"""Run configuration: TOML files with unit-suffixed keys.

Keys ending in ``_hz`` are ordinary frequencies and are converted to rad/s;
``_watt``, ``_kelvin`` and ``_s`` only label the SI unit. Bare names are taken
as already being in SI / rad/s.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .entanglement import SWEEPABLE, SweepSpec
from .errors import ConfigError, OptomagnonError
from .magnetoelastic import MaterialParams, mode_from_csv, mode_from_json
from .model import DirectCouplings, DriveFields, SystemParams
from .transfer import PulseSpec, SqueezedBath

TWO_PI = 2.0 * math.pi
SUFFIXES = {"_hz": TWO_PI, "_watt": 1.0, "_kelvin": 1.0, "_s": 1.0}

PARAM_KEYS = ("omega_m", "omega_b", "lambda_opt", "kappa_a", "kappa_m", "gamma_b",
              "g_a", "g_m", "T", "Delta_a", "Delta_m")
BLOCKS = {
    "entangle": ({"params"}, set()),
    "sweep": ({"params", "sweep"}, set()),
    "transfer": ({"params", "bath", "pulse"}, set()),
    "couplings": ({"material", "mode"}, set()),
}
COMMON_BLOCKS = {"output", "command"}


def split_unit(key):
    for suffix, factor in SUFFIXES.items():
        if key.endswith(suffix) and len(key) > len(suffix):
            return key[: -len(suffix)], factor
    return key, 1.0


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(where, "value must be finite")
    return float(value)


def normalize(section: dict, allowed, where, required=()):
    """Strip unit suffixes, convert to internal units, reject unknown keys."""
    out = {}
    for key, value in section.items():
        base, factor = split_unit(key)
        if base not in allowed:
            raise ConfigError(f"{where}.{key}", "unknown key")
        if base in out:
            raise ConfigError(f"{where}.{key}", f"{base!r} given more than once")
        out[base] = _number(value, f"{where}.{key}") * factor
    for key in required:
        if key not in out:
            raise ConfigError(f"{where}.{key}", "missing required key")
    return out


def _section(raw, name):
    sec = raw.get(name)
    if not isinstance(sec, dict):
        raise ConfigError(name, "expected a table")
    return sec


def parse_params(raw) -> SystemParams:
    sec = dict(_section(raw, "params"))
    drive_raw = sec.pop("drive", None)
    vals = normalize(sec, PARAM_KEYS, "params", required=PARAM_KEYS)
    if not isinstance(drive_raw, dict):
        raise ConfigError("params.drive", "missing table (G_a/G_m or P_L/Omega)")
    drive = normalize(drive_raw, ("G_a", "G_m", "P_L", "Omega"), "params.drive")
    if set(drive) == {"G_a", "G_m"}:
        d = DirectCouplings(drive["G_a"], drive["G_m"])
    elif set(drive) == {"P_L", "Omega"}:
        d = DriveFields(drive["P_L"], drive["Omega"])
    else:
        raise ConfigError("params.drive", f"give either G_a and G_m, or P_L and Omega (got {sorted(drive)})")
    try:
        return SystemParams(**vals, drive=d)
    except OptomagnonError as exc:
        raise ConfigError("params", str(exc)) from exc


def parse_axis(axis, where):
    if not isinstance(axis, dict):
        raise ConfigError(where, "expected a table with name and values or start/stop/num")
    extra = set(axis) - {"name", "values", "start", "stop", "num", "scale"}
    if extra:
        raise ConfigError(f"{where}.{sorted(extra)[0]}", "unknown key")
    label = axis.get("name")
    if not isinstance(label, str):
        raise ConfigError(f"{where}.name", "missing parameter name")
    base, factor = split_unit(label)
    if base not in SWEEPABLE:
        raise ConfigError(f"{where}.name", f"cannot sweep {label!r}; allowed: {', '.join(SWEEPABLE)}")
    if "values" in axis:
        if not isinstance(axis["values"], list):
            raise ConfigError(f"{where}.values", "expected a list")
        values = [_number(v, f"{where}.values") for v in axis["values"]]
    else:
        for k in ("start", "stop", "num"):
            if k not in axis:
                raise ConfigError(f"{where}.{k}", "missing (or give values)")
        num = axis["num"]
        if isinstance(num, bool) or not isinstance(num, int) or num < 1:
            raise ConfigError(f"{where}.num", "expected a positive integer")
        start = _number(axis["start"], f"{where}.start")
        stop = _number(axis["stop"], f"{where}.stop")
        scale = axis.get("scale", "linear")
        if scale == "linear":
            values = list(np.linspace(start, stop, num))
        elif scale == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(f"{where}.scale", "log scale needs positive bounds")
            values = list(np.geomspace(start, stop, num))
        else:
            raise ConfigError(f"{where}.scale", "expected 'linear' or 'log'")
    if not values:
        raise ConfigError(f"{where}.values", "axis has no values")
    return label, base, factor, [float(v) for v in values]


@dataclass
class SweepConfig:
    spec: SweepSpec
    labels: list[str]
    factors: list[float]
    threshold: bool = False


def parse_sweep(raw, params) -> SweepConfig:
    sec = _section(raw, "sweep")
    extra = set(sec) - {"axis1", "axis2", "threshold"}
    if extra:
        raise ConfigError(f"sweep.{sorted(extra)[0]}", "unknown key")
    if "axis1" not in sec:
        raise ConfigError("sweep.axis1", "sweep needs at least one axis")
    axes = [parse_axis(sec["axis1"], "sweep.axis1")]
    if "axis2" in sec:
        axes.append(parse_axis(sec["axis2"], "sweep.axis2"))
    threshold = sec.get("threshold", False)
    if not isinstance(threshold, bool):
        raise ConfigError("sweep.threshold", "expected true or false")
    if threshold and len(axes) != 1:
        raise ConfigError("sweep.threshold", "threshold search needs a single axis")
    built = [(base, [v * factor for v in values]) for _, base, factor, values in axes]
    for base, _ in built:
        if base in ("G_a", "G_m") and not params.direct:
            raise ConfigError("sweep", f"{base} can only be swept with direct couplings")
    spec = SweepSpec(built[0], params, built[1] if len(built) > 1 else None)
    return SweepConfig(spec, [a[0] for a in axes], [a[2] for a in axes], threshold)


def parse_bath(raw) -> SqueezedBath:
    vals = normalize(_section(raw, "bath"), ("r",), "bath", required=("r",))
    try:
        return SqueezedBath(vals["r"])
    except ValueError as exc:
        raise ConfigError("bath.r", str(exc)) from exc


def parse_pulse(raw, params) -> PulseSpec:
    vals = normalize(_section(raw, "pulse"), ("G_a", "duration", "kappa_a"), "pulse",
                     required=("G_a", "duration"))
    try:
        return PulseSpec(vals["G_a"], vals["duration"], vals.get("kappa_a", params.kappa_a))
    except ValueError as exc:
        raise ConfigError("pulse", str(exc)) from exc


def parse_material(raw) -> MaterialParams:
    keys = ("B1", "B2", "M_S", "gamma_gyro", "V_crystal")
    vals = normalize(_section(raw, "material"), keys, "material", required=keys)
    try:
        return MaterialParams(**vals)
    except OptomagnonError as exc:
        raise ConfigError("material", str(exc)) from exc


def parse_mode(raw, base_dir: Path):
    sec = dict(_section(raw, "mode"))
    file = sec.pop("file", None)
    if not isinstance(file, str):
        raise ConfigError("mode.file", "missing path to a CSV or JSON mode file")
    vals = normalize(sec, ("d_zpm", "omega_b", "omega_m"), "mode")
    path = Path(file)
    if not path.is_absolute():
        path = base_dir / path
    try:
        if path.suffix.lower() == ".json":
            mode = mode_from_json(path, vals.get("d_zpm"))
        else:
            if "d_zpm" not in vals:
                raise ConfigError("mode.d_zpm", "required for CSV mode files")
            mode = mode_from_csv(path, vals["d_zpm"])
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError("mode.file", f"cannot load {path}: {exc}") from exc
    return mode, vals.get("omega_b"), vals.get("omega_m")


@dataclass
class OutputConfig:
    format: str = "csv"
    path: str = "out"
    wigner_points: int = 201
    wigner_span_sigma: float = 5.0


def parse_output(raw) -> OutputConfig:
    sec = raw.get("output", {})
    if not isinstance(sec, dict):
        raise ConfigError("output", "expected a table")
    out = OutputConfig()
    for key, value in sec.items():
        if key == "format":
            if value not in ("csv", "json"):
                raise ConfigError("output.format", "expected 'csv' or 'json'")
            out.format = value
        elif key == "path":
            out.path = str(value)
        elif key == "wigner_points":
            if isinstance(value, bool) or not isinstance(value, int) or value < 3:
                raise ConfigError("output.wigner_points", "expected an integer >= 3")
            out.wigner_points = value
        elif key == "wigner_span_sigma":
            out.wigner_span_sigma = _number(value, "output.wigner_span_sigma")
        else:
            raise ConfigError(f"output.{key}", "unknown key")
    return out


def _parse_value(text):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_override(raw: dict, assignment: str):
    """Apply ``section.key=value``; replaces any unit-suffixed spelling of the key."""
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like section.key=value")
    path, text = assignment.split("=", 1)
    parts = path.strip().split(".")
    node = raw
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(path, f"{part!r} is not a table")
        node = child
    leaf = parts[-1]
    base = split_unit(leaf)[0]
    for key in [k for k in node if split_unit(k)[0] == base]:
        del node[key]
    node[leaf] = _parse_value(text.strip())


@dataclass
class RunConfig:
    command: str
    raw: dict
    base_dir: Path
    output: OutputConfig = field(default_factory=OutputConfig)


def load(path, command, overrides=()) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"not valid TOML: {exc}") from exc
    for assignment in overrides:
        apply_override(raw, assignment)
    return from_dict(raw, command, path.parent)


def from_dict(raw, command, base_dir=Path(".")) -> RunConfig:
    if command not in BLOCKS:
        raise ConfigError("command", f"unknown subcommand {command!r}")
    declared = raw.get("command")
    if declared is not None and declared != command:
        raise ConfigError("command", f"config is for {declared!r}, not {command!r}")
    required, optional = BLOCKS[command]
    for key in raw:
        if key not in required | optional | COMMON_BLOCKS:
            raise ConfigError(key, f"block not used by {command!r}")
    for key in sorted(required):
        if key not in raw:
            raise ConfigError(key, f"required by {command!r}")
    return RunConfig(command, raw, Path(base_dir), parse_output(raw))
