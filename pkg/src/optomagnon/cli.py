"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfg
from .entanglement import find_threshold, stationary_entanglement, sweep
from .errors import ConfigError, NumericalError, OptomagnonError, UnknownParameter
from .magnetoelastic import coupling_regime, g_dispersive, g_linear, g_parametric
from .transfer import full_readout

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
TWO_PI = 2.0 * math.pi


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path: Path, doc):
    # float repr round-trips exactly
    with open(path, "w") as fh:
        json.dump(_jsonable(doc), fh, indent=1, allow_nan=False)
        fh.write("\n")


def cmd_entangle(run: cfg.RunConfig, out: Path, fmt: str, threads: int):
    params = cfg.parse_params(run.raw)
    res = stationary_entanglement(params)
    doc = {
        "E_N": res.E_N,
        "stable": res.stable,
        "max_real_eig": res.max_real_eig,
        "G_a_hz": res.G_a / TWO_PI,
        "G_m_hz": res.G_m / TWO_PI,
        "nearly_real_couplings": res.nearly_real,
        "resolved_sideband": params.resolved_sideband,
        "V": res.V,
    }
    if fmt == "json":
        write_json(out / "entangle.json", doc)
    else:
        header = ["E_N", "stable", "max_real_eig", "G_a_hz_re", "G_a_hz_im", "G_m_hz_re", "G_m_hz_im"]
        ga, gm = doc["G_a_hz"], doc["G_m_hz"]
        write_csv(out / "entangle.csv", header,
                  [[res.E_N, res.stable, res.max_real_eig, ga.real, ga.imag, gm.real, gm.imag]])
    return f"E_N={res.E_N:.6g} stable={_fmt(res.stable)} max_real_eig={res.max_real_eig:.6g}"


def cmd_sweep(run: cfg.RunConfig, out: Path, fmt: str, threads: int):
    params = cfg.parse_params(run.raw)
    sc = cfg.parse_sweep(run.raw, params)
    try:
        result = sweep(sc.spec, threads=threads)
    except UnknownParameter as exc:
        raise ConfigError("sweep", str(exc)) from exc
    n_axes = len(sc.labels)
    header = [*sc.labels, "E_N", "stable", "max_real_eig"]
    rows = [[*(v / f for v, f in zip(row[:n_axes], sc.factors)), *row[n_axes:]] for row in result.rows]

    threshold = None
    if sc.threshold:
        name, values = sc.spec.axis1
        x = find_threshold(params, name, values)
        threshold = None if x is None else x / sc.factors[0]

    if fmt == "json":
        write_json(out / "sweep.json", {"columns": header, "rows": rows,
                                        "threshold": {sc.labels[0]: threshold} if sc.threshold else None})
    else:
        write_csv(out / "sweep.csv", header, rows)
        if sc.threshold:
            write_csv(out / "threshold.csv", ["parameter", "value"], [[sc.labels[0], threshold]])

    best = max(rows, key=lambda r: r[n_axes])
    where = " ".join(f"{lab}={v:.6g}" for lab, v in zip(sc.labels, best[:n_axes]))
    unstable = sum(1 for r in rows if not r[n_axes + 1])
    summary = f"points={len(rows)} max_E_N={best[n_axes]:.6g} at {where} unstable={unstable}"
    if sc.threshold:
        summary += f" threshold_{sc.labels[0]}=" + ("none" if threshold is None else f"{threshold:.6g}")
    return summary


def cmd_transfer(run: cfg.RunConfig, out: Path, fmt: str, threads: int):
    params = cfg.parse_params(run.raw)
    bath = cfg.parse_bath(run.raw)
    pulse = cfg.parse_pulse(run.raw, params)
    if not params.direct:
        raise ConfigError("params.drive", "transfer needs direct couplings (G_a_hz, G_m_hz)")
    o = run.output
    res = full_readout(params, bath, pulse, points=o.wigner_points, span_sigma=o.wigner_span_sigma)
    summary = {"F1": res.F1, "S": res.S, "F_total": res.F_total, **res.flags}
    if fmt == "json":
        doc = dict(summary, V_m0=res.V_m0, V_b=res.V_b, V_out=res.V_out,
                   wigner={k: {"q": g.q, "p": g.p, "W": g.W, "norm": g.norm} for k, g in res.grids.items()})
        write_json(out / "transfer.json", doc)
    else:
        write_csv(out / "transfer.csv", list(summary), [list(summary.values())])
        cms = [("V_m0", res.V_m0), ("V_b", res.V_b), ("V_out", res.V_out)]
        write_csv(out / "covariances.csv", ["state", "V11", "V12", "V21", "V22"],
                  [[name, *np.ravel(V)] for name, V in cms])
        for name, grid in res.grids.items():
            write_csv(out / f"wigner_{name}.csv", ["q", "p", "W"], grid.rows())
    return f"F1={res.F1:.4f} S={res.S:.4f} F_total={res.F_total:.4f}"


def cmd_couplings(run: cfg.RunConfig, out: Path, fmt: str, threads: int):
    mat = cfg.parse_material(run.raw)
    mode, omega_b, omega_m = cfg.parse_mode(run.raw, run.base_dir)
    g_disp = g_dispersive(mode, mat)
    g_lin = g_linear(mode, mat)
    g_pa = g_parametric(mode, mat)
    regime = coupling_regime(omega_b, omega_m) if omega_b and omega_m else None
    doc = {
        "g_disp": g_disp,
        "g_lin_re": g_lin.real, "g_lin_im": g_lin.imag,
        "g_pa_re": g_pa.real, "g_pa_im": g_pa.imag,
        "regime": regime,
    }
    if fmt == "json":
        write_json(out / "couplings.json", doc)
    else:
        write_csv(out / "couplings.csv", list(doc), [list(doc.values())])
    summary = (f"g_disp/2pi={g_disp / TWO_PI:.6g} Hz |g_lin|/2pi={abs(g_lin) / TWO_PI:.6g} Hz "
               f"|g_pa|/2pi={abs(g_pa) / TWO_PI:.6g} Hz")
    if regime:
        summary += f" regime={regime}"
    return summary


COMMANDS = {
    "entangle": cmd_entangle,
    "sweep": cmd_sweep,
    "transfer": cmd_transfer,
    "couplings": cmd_couplings,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="optomagnon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("entangle", "stationary cavity-magnon entanglement"),
        ("sweep", "entanglement over a 1-D or 2-D parameter grid"),
        ("transfer", "magnon -> phonon -> optical pulse readout"),
        ("couplings", "magnetoelastic coupling rates from a mode file"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="TOML configuration file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config value, e.g. params.T=0.145 (repeatable)")
        p.add_argument("--out", help="output directory (default: output.path or ./out)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        conf = cfg.load(args.config, args.command, args.set)
        out = Path(args.out or conf.output.path)
        fmt = args.format or conf.output.format
        if args.threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        out.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](conf, out, fmt, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OptomagnonError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(summary)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
