import json
import math

import numpy as np
import pytest

from optomagnon.errors import GridTooSmall
from optomagnon.magnetoelastic import (
    DisplacementMode,
    MaterialParams,
    coupling_regime,
    g_dispersive,
    g_linear,
    g_parametric,
    mode_from_csv,
    mode_from_json,
    strain,
)

L = 2e-6
D_ZPM = 3e-15
MAT = MaterialParams(B1=3.48e5, B2=6.96e5, M_S=1.4e5, gamma_gyro=1.76e11, V_crystal=9e-19)
HBAR = 1.054571817e-34


def box(func, n=9, d=D_ZPM):
    return DisplacementMode.from_function(func, (n, n, n), (L, L, L), d)


def zero(X):
    return np.zeros_like(X)


def rigid(X, Y, Z):
    return (np.full_like(X, 0.3), np.full_like(X, -1.2), np.full_like(X, 0.7))


class TestStrain:
    def test_rigid_translation(self):
        for e in strain(box(rigid)).values():
            assert np.max(np.abs(e)) < 1e-6 / L

    def test_uniaxial(self):
        e = strain(box(lambda X, Y, Z: (zero(X), zero(X), Z / L)))
        assert np.allclose(e["zz"], 1 / L, rtol=1e-12)
        for k in ("xx", "yy", "xy", "xz", "yz"):
            assert np.allclose(e[k], 0.0, atol=1e-9 / L)

    def test_shear(self):
        e = strain(box(lambda X, Y, Z: (Y / L, zero(X), zero(X))))
        assert np.allclose(e["xy"], 1 / (2 * L), rtol=1e-12)

    def test_grid_too_small(self):
        mode = DisplacementMode.from_function(rigid, (2, 5, 5), (L, L, L), D_ZPM)
        with pytest.raises(GridTooSmall):
            strain(mode)


class TestDispersive:
    def test_rigid(self):
        assert g_dispersive(box(rigid), MAT) == pytest.approx(0.0, abs=1e-9)

    def test_uniaxial_analytic(self):
        mode = box(lambda X, Y, Z: (zero(X), zero(X), Z / L), n=64)
        exact = MAT.B1 / MAT.M_S * MAT.gamma_gyro / MAT.V_crystal * D_ZPM * (-2 / L) * L ** 3
        assert g_dispersive(mode, MAT) == pytest.approx(exact, rel=1e-3)

    def test_volume_preserving(self):
        mode = box(lambda X, Y, Z: (X / L, -Y / L, zero(X)))
        assert g_dispersive(mode, MAT) == pytest.approx(0.0, abs=1e-9)


class TestLinear:
    def test_rigid(self):
        assert abs(g_linear(box(rigid), MAT)) == pytest.approx(0.0, abs=1e-6)

    def test_xz_shear_analytic(self):
        g = g_linear(box(lambda X, Y, Z: (Z / L, zero(X), zero(X)), n=64), MAT)
        pref = MAT.B2 / MAT.M_S * math.sqrt(MAT.gamma_gyro * MAT.M_S / (2 * HBAR * MAT.V_crystal))
        exact = pref * D_ZPM * L ** 3 / L
        assert g.real == pytest.approx(exact, rel=1e-3)
        assert g.imag == pytest.approx(0.0, abs=1e-9 * exact)

    def test_yz_shear_is_imaginary(self):
        g = g_linear(box(lambda X, Y, Z: (zero(X), Z / L, zero(X))), MAT)
        assert g.real == pytest.approx(0.0, abs=1e-9 * abs(g))
        assert g.imag > 0


class TestParametric:
    def test_isotropic_stretch(self):
        g = g_parametric(box(lambda X, Y, Z: (X / L, Y / L, zero(X))), MAT)
        assert g.real == pytest.approx(0.0, abs=1e-9)

    def test_stretch_analytic(self):
        g = g_parametric(box(lambda X, Y, Z: (X / L, zero(X), zero(X)), n=64), MAT)
        exact = MAT.gamma_gyro / (2 * MAT.V_crystal * MAT.M_S) * MAT.B1 * D_ZPM * L ** 3 / L
        assert g.real == pytest.approx(exact, rel=1e-3)
        assert g.imag == pytest.approx(0.0, abs=1e-9 * exact)

    def test_pure_shear_is_imaginary(self):
        g = g_parametric(box(lambda X, Y, Z: (Y / L, X / L, zero(X))), MAT)
        assert g.real == pytest.approx(0.0, abs=1e-9 * abs(g))
        assert g.imag != 0


def smooth(X, Y, Z):
    return (np.sin(math.pi * X / L) * np.cos(Y / L),
            np.cos(math.pi * Y / (2 * L)) * (1 + Z / L),
            np.sin(math.pi * Z / L) ** 2 + X * Y / L ** 2)


@pytest.mark.parametrize("g", [g_dispersive, g_linear, g_parametric])
def test_translation_invariance(g):
    base = g(box(smooth), MAT)
    shifted = g(box(lambda X, Y, Z: tuple(c + s for c, s in zip(smooth(X, Y, Z), (0.4, -2.0, 1.5)))), MAT)
    assert abs(shifted - base) <= 1e-12 * abs(base)


@pytest.mark.parametrize("g", [g_dispersive, g_linear, g_parametric])
def test_linear_in_zero_point_amplitude(g):
    assert g(box(smooth, d=2 * D_ZPM), MAT) == pytest.approx(2 * g(box(smooth), MAT), rel=1e-14)


def test_linear_in_coefficients():
    mode = box(smooth)
    doubled = MaterialParams(2 * MAT.B1, 2 * MAT.B2, MAT.M_S, MAT.gamma_gyro, MAT.V_crystal)
    assert g_dispersive(mode, doubled) == pytest.approx(2 * g_dispersive(mode, MAT), rel=1e-14)
    assert g_linear(mode, doubled) == pytest.approx(2 * g_linear(mode, MAT), rel=1e-14)
    assert g_parametric(mode, doubled) == pytest.approx(2 * g_parametric(mode, MAT), rel=1e-14)


@pytest.mark.parametrize("g", [g_dispersive, g_linear, g_parametric])
def test_grid_convergence(g):
    coarse = g(box(smooth, n=33), MAT)
    fine = g(box(smooth, n=65), MAT)
    assert abs(fine - coarse) < 5e-3 * abs(fine)


@pytest.mark.parametrize("ratio,label", [
    (0.008, "dispersive"), (1.0, "linear"), (2.0, "parametric"), (0.5, "mixed"), (1.5, "mixed"),
])
def test_regime(ratio, label):
    assert coupling_regime(ratio * 5e9, 5e9) == label


def _write_csv(path, mode, shuffle=False):
    x, y, z = mode.coords()
    X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
    rows = np.column_stack([X.ravel(), Y.ravel(), Z.ravel(),
                            mode.chi_x.ravel(), mode.chi_y.ravel(), mode.chi_z.ravel()])
    if shuffle:
        rows = rows[np.random.default_rng(0).permutation(len(rows))]
    with open(path, "w") as fh:
        fh.write("x,y,z,chi_x,chi_y,chi_z\n")
        for r in rows:
            fh.write(",".join(repr(float(v)) for v in r) + "\n")


def test_csv_round_trip(tmp_path):
    mode = DisplacementMode.from_function(smooth, (5, 4, 3), (L, 0.6 * L, 0.3 * L), D_ZPM)
    _write_csv(tmp_path / "m.csv", mode, shuffle=True)
    back = mode_from_csv(tmp_path / "m.csv", D_ZPM)
    assert back.shape == mode.shape
    assert back.spacing == pytest.approx(mode.spacing, rel=1e-9)
    assert np.allclose(back.chi_z, mode.chi_z, rtol=0, atol=0)
    assert g_dispersive(back, MAT) == pytest.approx(g_dispersive(mode, MAT), rel=1e-9)


def test_csv_with_holes(tmp_path):
    mode = DisplacementMode.from_function(smooth, (3, 3, 3), (L, L, L), D_ZPM)
    _write_csv(tmp_path / "m.csv", mode)
    lines = (tmp_path / "m.csv").read_text().splitlines()
    (tmp_path / "m.csv").write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        mode_from_csv(tmp_path / "m.csv", D_ZPM)


def test_json_round_trip(tmp_path):
    mode = DisplacementMode.from_function(smooth, (4, 4, 4), (L, L, L), D_ZPM)
    doc = {"spacing": list(mode.spacing), "origin": [0, 0, 0], "d_zpm": D_ZPM,
           "chi_x": mode.chi_x.tolist(), "chi_y": mode.chi_y.tolist(), "chi_z": mode.chi_z.tolist()}
    (tmp_path / "m.json").write_text(json.dumps(doc))
    back = mode_from_json(tmp_path / "m.json")
    assert back.d_zpm == D_ZPM
    assert g_parametric(back, MAT) == g_parametric(mode, MAT)
