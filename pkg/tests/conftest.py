import importlib

import numpy as np
import pytest

from optomagnon import _kernels_py

ACCEPTANCE_LINES = []


def _compiled():
    try:
        return importlib.import_module("optomagnon._kernels")
    except ImportError:
        return None


KERNELS = [pytest.param(_kernels_py, id="python")]
if _compiled() is not None:
    KERNELS.append(pytest.param(_compiled(), id="compiled"))


@pytest.fixture(params=KERNELS)
def kernels(request):
    return request.param


def random_stable(rng, n):
    """Random Hurwitz matrix with spectral abscissa in [-2, -0.1]."""
    M = rng.normal(size=(n, n))
    shift = np.max(np.linalg.eigvals(M).real) + rng.uniform(0.1, 2.0)
    return M - shift * np.eye(n)


def random_psd(rng, n):
    B = rng.normal(size=(n, n))
    return B @ B.T


def symplectic_eigenvalues(V):
    n = V.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ev = np.abs(np.linalg.eigvals(1j * omega @ V))
    return np.sort(ev)[::2]


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
