"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times each kernel on representative inputs, then a 41 x 41 detuning sweep run
end to end with each backend swapped in.
"""
import argparse
import importlib
import math
import timeit

import numpy as np

import optomagnon.gaussian as gaussian
from optomagnon import _kernels_py
from optomagnon.entanglement import SweepSpec, sweep
from optomagnon.model import reference_params


def backends():
    out = {"python": _kernels_py}
    try:
        out["compiled"] = importlib.import_module("optomagnon._kernels")
    except ImportError:
        print("compiled extension not built; timing the fallback only")
    return out


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    A6 = rng.normal(size=(6, 6))
    A6 -= (np.max(np.linalg.eigvals(A6).real) + 1.0) * np.eye(6)
    B = rng.normal(size=(6, 6))
    D6 = B @ B.T
    V4 = D6[:4, :4] + np.eye(4)
    V2 = np.array([[1.3, 0.4], [0.4, 0.6]])
    q = p = np.linspace(-5, 5, 201)

    w = 2 * math.pi * 40e6
    spec = SweepSpec(("Delta_m", np.linspace(-2 * w, 0, 41)), reference_params(), ("Delta_a", np.linspace(0, 2 * w, 41)))

    cases = [
        ("lyapunov 6x6", lambda k: (lambda: k.lyapunov(A6, D6)), 2000),
        ("lognegativity terms 4x4", lambda k: (lambda: k.lognegativity_terms(V4)), 20000),
        ("wigner grid 201x201", lambda k: (lambda: k.wigner_grid(V2, q, p)), 50),
    ]
    kern = backends()
    results = {}
    print(f"{'case':28s}" + "".join(f"{name:>14s}" for name in kern) + "     speedup")
    for label, make, number in cases:
        results[label] = {name: best(make(k), args.repeat, number) for name, k in kern.items()}
    saved = gaussian.kernels
    try:
        results["sweep 41x41"] = {}
        for name, k in kern.items():
            gaussian.kernels = k
            results["sweep 41x41"][name] = best(lambda: sweep(spec), max(1, args.repeat // 2), 1)
    finally:
        gaussian.kernels = saved

    for label, times in results.items():
        row = f"{label:28s}" + "".join(f"{t * 1e6:12.1f}us" for t in times.values())
        if "compiled" in times:
            row += f"  {times['python'] / times['compiled']:8.2f}x"
        print(row)


if __name__ == "__main__":
    main()
