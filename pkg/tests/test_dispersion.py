import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from he4film import dispersion as disp
from he4film.errors import NegativeRadicand, NonPositiveDenominator
from he4film.params import (
    ANGSTROM,
    FilmParameters,
    HydroParameters,
    RotonMassWarning,
    classical_coefficients,
    coefficients_from_hydro,
    coefficients_from_roton,
)

from conftest import film

QUOTED = {1: (20.5576, -5.16972, 0.433336), 2: (23.4511, -31.0971, 13.3083)}
# sqrt(A + B + C) with the quoted case-1 table, evaluated at 1/Angstrom
E_TILDE_AT_1 = 3.977589219615318698
# m_r for case 1 from the closed form at 40 digits
M_R_CASE1 = 8.6621839522308219e-25


@pytest.mark.parametrize("case", [1, 2])
def test_table_coefficients(case):
    t = disp.dispersion_table_coefficients(film(case))
    assert (t.A, t.B, t.C) == pytest.approx(QUOTED[case], rel=1e-4)


def test_energy_at_half_k0_case1(case1):
    e = disp.excitation_energy(case1, 1.0 / ANGSTROM) / case1.constants.k_B
    assert e == pytest.approx(E_TILDE_AT_1, rel=1e-4)


@pytest.mark.parametrize("case", [1, 2])
def test_gap_and_stationarity(case):
    p = film(case)
    assert disp.excitation_energy(p, p.k0) == pytest.approx(p.delta, rel=1e-12)
    assert disp.excitation_energy(p, 0.0) == 0.0
    h = 1e-6 * p.k0
    slope = (disp.excitation_energy(p, p.k0 + h) - disp.excitation_energy(p, p.k0 - h)) / (2 * h)
    assert abs(slope) * p.k0 / p.delta < 1e-8


def test_case1_roton_minimum_and_maxon(case1):
    k, e, valid = disp.dispersion_table(case1, 0.0, 2.5, 10_001)
    assert valid.all()
    interior = np.flatnonzero((e[1:-1] < e[:-2]) & (e[1:-1] <= e[2:])) + 1
    assert abs(k[interior[0]] - 2.0) <= k[1] - k[0]
    assert e[interior[0]] == pytest.approx(5.22, rel=1e-6)


def test_case2_k0_is_a_local_maximum(case2):
    """With these inputs 3 Delta^2 > (c_s hbar k0)^2, so k0 is a maximum of E."""
    assert not case2.roton_mass_positive
    assert disp.roton_curvature(case2) < 0
    k, e, _ = disp.dispersion_table(case2, 0.0, 2.5, 10_001)
    i = np.flatnonzero((e[1:-1] < e[:-2]) & (e[1:-1] <= e[2:])) + 1
    assert k[i[0]] == pytest.approx(0.958, abs=1e-3)
    assert e[i[0]] == pytest.approx(2.370, abs=1e-3)


def test_quantum_omega_matches_energy(case1, coeffs1):
    k = np.linspace(0, 2.5e10, 101)
    lhs = disp.quantum_omega_squared(coeffs1, case1, k)
    rhs = disp.excitation_energy(case1, k) ** 2 / case1.hbar**2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12 * rhs.max())
    small = 1e3
    assert np.sqrt(disp.quantum_omega_squared(coeffs1, case1, small)) / small == pytest.approx(case1.c_s, rel=1e-9)


def test_model_from_coefficients_matches(case1, coeffs1):
    a = disp.dispersion_model(case1)
    b = disp.dispersion_model_from_coefficients(coeffs1, case1)
    assert a.Lambdas == pytest.approx(b.Lambdas, rel=1e-10)
    assert a.sign_pattern_ok


def test_negative_radicand_raised():
    # Delta^2 > (c_s hbar k0)^2 / 2 makes the k^6 coefficient negative beyond k0
    with pytest.warns(RotonMassWarning):
        p = FilmParameters(c_s=20.0, delta=8.0, k0=2e10, delta_unit="K")
    k = np.linspace(0, 4e10, 200)
    e2 = disp.dispersion_model(p).energy_squared(k)
    assert (e2 < 0).any()
    with pytest.raises(NegativeRadicand) as exc:
        disp.excitation_energy(p, k)
    assert exc.value.k > 0
    _, energy, valid = disp.dispersion_table(p, 0, 4.0, 200)
    assert not valid.all() and np.isnan(energy[~valid]).all()


def test_roton_mass(case1, case2):
    assert disp.roton_effective_mass(case1) == pytest.approx(M_R_CASE1, rel=1e-12)
    with pytest.raises(NonPositiveDenominator):
        disp.roton_effective_mass(case2)
    assert disp.roton_effective_mass(case2, allow_negative=True) < 0
    assert disp.roton_curvature(case1) == pytest.approx(case1.hbar**2 / M_R_CASE1, rel=1e-10)


def test_roton_mass_vanishes_with_gap():
    small = [disp.roton_effective_mass(FilmParameters(59.36, d, 2e10, delta_unit="K")) for d in (1e-2, 1e-4, 1e-6)]
    assert small[0] > small[1] > small[2] > 0
    assert small[2] / small[1] == pytest.approx(1e-2, rel=1e-3)


def test_roton_expansion_remainder_is_cubic(case1):
    k0 = case1.k0
    eps = np.array([0.05, 0.025, 0.0125, 0.00625])
    err = np.abs(disp.roton_expansion(case1, k0 * (1 + eps)) - disp.excitation_energy(case1, k0 * (1 + eps)))
    slope = np.polyfit(np.log(eps), np.log(err), 1)[0]
    assert slope == pytest.approx(3.0, abs=0.1)
    assert disp.roton_expansion(case1, k0) == case1.delta
    a, b = disp.roton_expansion(case1, k0 * np.array([0.97, 1.03]))
    assert a == pytest.approx(b, rel=1e-15)


def test_generalized_dispersion_series(case1):
    h = HydroParameters(gamma=3.5e-4, rho=145.0, q=0.9, f_r=1e9)
    s2, s4, s6 = disp.generalized_series_coefficients(case1, h)
    z0 = case1.zeta0
    x = np.array([1e-3, 2e-3, 4e-3])
    k = x / z0
    exact = disp.generalized_omega_squared(case1, h, k)
    series = s2 * x**2 + s4 * x**4 + s6 * x**6
    # remainder is O(x^8)
    rem = np.abs(exact - series) / exact
    assert rem[-1] < 1e-10
    assert np.sqrt(disp.generalized_omega_squared(case1, h, 1e3)) / 1e3 == pytest.approx(case1.c_s, rel=1e-6)
    # hydro coefficients reproduce the same series through the quantum law without the hbar^2 term
    c = coefficients_from_hydro(case1, h)
    m = case1.m
    assert c.G / (m * z0) == pytest.approx(s2, rel=1e-12)
    assert -(c.beta - case1.hbar**2 / (4 * m * z0)) / (m * z0**3) == pytest.approx(s4, rel=1e-10)
    assert c.sigma / (m * z0**5) == pytest.approx(s6, rel=1e-10)


def test_generalized_reduces_to_classical():
    g, z0 = 9.81, 0.3
    h = HydroParameters(gamma=0.07, rho=1000.0)
    p = FilmParameters(c_s=np.sqrt(g * z0), delta=1e-40, k0=1.0, zeta0=z0)
    k = np.linspace(0.1, 5, 7)
    np.testing.assert_allclose(disp.generalized_omega_squared(p, h, k),
                               disp.gravity_wave_omega_squared(g, h, z0, k), rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(1, 20), st.floats(0, 0.1), st.floats(100, 2000), st.floats(1e-3, 1))
def test_classical_polynomial_is_the_taylor_truncation(g, gamma, rho, zeta0):
    h = HydroParameters(gamma=gamma, rho=rho)
    cc = classical_coefficients(g, h, zeta0)
    x = 1e-2
    k = x / zeta0
    exact = disp.gravity_wave_omega_squared(g, h, zeta0, k)
    poly = disp.classical_omega_squared(cc, zeta0, k)
    assert abs(exact - poly) <= 1e-6 * abs(exact)
    assert disp.classical_omega_squared(cc, zeta0, 0.0) == 0.0


def test_shallow_water_limit():
    h = HydroParameters(gamma=0.0, rho=1000.0)
    g, z0 = 9.81, 0.1
    cc = classical_coefficients(g, h, z0)
    k = 1e-3
    assert np.sqrt(disp.classical_omega_squared(cc, z0, k)) / k == pytest.approx(np.sqrt(g * z0), rel=1e-6)


def test_zero_gap_table():
    p = FilmParameters(c_s=59.36, delta=1e-30, k0=2e10)
    t = disp.dispersion_table_coefficients(p)
    assert t.B == pytest.approx(-2 * t.A / 4.0, rel=1e-12)
    assert t.C == pytest.approx(t.A / 16.0, rel=1e-12)


def test_table_single_point(case1):
    k, e, valid = disp.dispersion_table(case1, 0.0, 0.0, 1)
    assert k.tolist() == [0.0] and e.tolist() == [0.0] and valid.all()
    with pytest.raises(ValueError):
        disp.dispersion_table(case1, 1.0, 0.0, 3)


def test_complex_argument_accepted():
    h = HydroParameters(gamma=0.01, rho=1000.0)
    v = disp.gravity_wave_omega_squared(9.81, h, 0.1, 1j)
    assert np.iscomplexobj(v)
