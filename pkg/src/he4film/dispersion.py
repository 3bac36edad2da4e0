"""Dispersion relations of the film model.

All wavenumbers are in 1/m and energies in J unless a function says otherwise
(the ``table`` helpers use the Kelvin / Angstrom units customary for He-4
excitation spectra).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeRadicand, NonPositiveDenominator
from .params import (
    ANGSTROM,
    ClassicalCoefficients,
    FilmParameters,
    HydroParameters,
    PhysicalCoefficients,
)


@dataclass(frozen=True)
class DispersionModel:
    """E(k)^2 = Lambda1 k^2 + Lambda2 k^4 + Lambda3 k^6, and the same law in
    momentum form eps(p)^2 = lambda1 p^2 + lambda2 p^4 + lambda3 p^6, p = hbar k."""

    Lambdas: tuple[float, float, float]
    lambdas: tuple[float, float, float]
    hbar: float
    provenance: str

    def energy_squared(self, k):
        k2 = np.asarray(k, dtype=float) ** 2
        L1, L2, L3 = self.Lambdas
        return k2 * (L1 + k2 * (L2 + k2 * L3))

    def energy(self, k):
        """E(k); raises :class:`NegativeRadicand` at the first bad k."""
        e2 = self.energy_squared(k)
        bad = e2 < 0
        if np.any(bad):
            k_arr = np.broadcast_to(np.asarray(k, dtype=float), np.shape(e2))
            i = np.flatnonzero(bad)[0]
            raise NegativeRadicand(float(k_arr.flat[i]), float(e2.flat[i]))
        return np.sqrt(e2)

    @property
    def sign_pattern_ok(self) -> bool:
        l1, l2, l3 = self.lambdas
        return l1 > 0 and l2 < 0 and l3 > 0


def _from_Lambdas(Lambdas, hbar, provenance):
    L1, L2, L3 = Lambdas
    return DispersionModel(
        Lambdas=(L1, L2, L3),
        lambdas=(L1 / hbar**2, L2 / hbar**4, L3 / hbar**6),
        hbar=hbar,
        provenance=provenance,
    )


def dispersion_model(p: FilmParameters) -> DispersionModel:
    """Coefficients fixed by sound slope c_s, E(k0) = Delta and E'(k0) = 0."""
    h = p.hbar
    p0 = h * p.k0
    c2, d2 = p.c_s**2, p.delta**2
    lambdas = (c2, 3 * d2 / p0**4 - 2 * c2 / p0**2, c2 / p0**4 - 2 * d2 / p0**6)
    Lambdas = (lambdas[0] * h**2, lambdas[1] * h**4, lambdas[2] * h**6)
    return DispersionModel(Lambdas=Lambdas, lambdas=lambdas, hbar=h, provenance="from_roton_inputs")


def dispersion_model_from_coefficients(c: PhysicalCoefficients, p: FilmParameters) -> DispersionModel:
    """The same law written through arbitrary G, beta, sigma."""
    m, h, z0 = p.m, p.hbar, p.zeta0
    Lambdas = (c.G * z0 * h**2 / m, h**4 / (4 * m**2) - c.beta * z0 * h**2 / m, c.sigma * z0 * h**2 / m)
    return _from_Lambdas(Lambdas, h, "from_coefficients")


def quantum_omega_squared(c: PhysicalCoefficients, p: FilmParameters, k):
    """omega^2 of the linearized quantum equation, as a polynomial in k*zeta0."""
    m, h, z0 = p.m, p.hbar, p.zeta0
    x = np.asarray(k, dtype=float) * z0
    return (
        c.G / (m * z0) * x**2
        + (h**2 / (4 * m**2 * z0**4) - c.beta / (m * z0**3)) * x**4
        + c.sigma / (m * z0**5) * x**6
    )


def generalized_omega_squared(p: FilmParameters, h: HydroParameters, k):
    """Two-fluid dispersion with a roton term, evaluated with the full tanh."""
    k = np.asarray(k, dtype=float)
    z0 = p.zeta0
    bracket = p.c_s**2 * k / z0 + h.q * h.gamma * k**3 / h.rho + h.q * h.f_r * z0**4 * k**5
    return bracket * np.tanh(k * z0)


def generalized_series_coefficients(p: FilmParameters, h: HydroParameters):
    """Coefficients of (k zeta0)^2, ^4, ^6 in the small-k expansion of
    :func:`generalized_omega_squared`."""
    z0, c2, q = p.zeta0, p.c_s**2, h.q
    return (
        c2 / z0**2,
        q * h.gamma / (h.rho * z0**3) - c2 / (3 * z0**2),
        q * h.f_r / z0 + 2 * c2 / (15 * z0**2) - q * h.gamma / (3 * h.rho * z0**3),
    )


def classical_omega_squared(cc: ClassicalCoefficients, zeta0: float, k):
    """Polynomial gravity-wave law; note the minus sign on the beta0 term.

    Accepts complex k (used to extract Taylor coefficients on a circle)."""
    x = np.asarray(k) * zeta0
    return cc.G0 / zeta0 * x**2 - cc.beta0 / zeta0**3 * x**4 + cc.sigma0 / zeta0**5 * x**6


def gravity_wave_omega_squared(g: float, h: HydroParameters, zeta0: float, k):
    """Exact finite-depth gravity-capillary law (g k + gamma k^3/rho) tanh(k zeta0).

    Accepts complex k."""
    k = np.asarray(k)
    return (g * k + h.gamma * k**3 / h.rho) * np.tanh(k * zeta0)


def excitation_energy(p: FilmParameters, k):
    """Phonon-roton energy E(k) in J. E(k0) = Delta, E'(k0) = 0."""
    return dispersion_model(p).energy(k)


@dataclass(frozen=True)
class DispersionTableCoefficients:
    """E/k_B = sqrt(A k^2 + B k^4 + C k^6) with k in 1/Angstrom.
    Units: A in K^2 A^2, B in K^2 A^4, C in K^2 A^6."""

    A: float
    B: float
    C: float

    def energy_kelvin(self, k_per_angstrom):
        k2 = np.asarray(k_per_angstrom, dtype=float) ** 2
        e2 = k2 * (self.A + k2 * (self.B + k2 * self.C))
        return np.sqrt(np.where(e2 >= 0, e2, np.nan)), e2 >= 0


def dispersion_table_coefficients(p: FilmParameters) -> DispersionTableCoefficients:
    kb = p.constants.k_B
    A = (p.c_s * p.hbar / kb) ** 2 / ANGSTROM**2
    dk = p.delta_kelvin
    k0 = p.k0 * ANGSTROM
    return DispersionTableCoefficients(
        A=A,
        B=3 * dk**2 / k0**4 - 2 * A / k0**2,
        C=A / k0**4 - 2 * dk**2 / k0**6,
    )


def roton_effective_mass(p: FilmParameters, allow_negative: bool = False) -> float:
    """m_r in kg, from the curvature of E(k) at the roton minimum.

    When 3 Delta^2 > c_s^2 hbar^2 k0^2 the stationary point at k0 is a maximum;
    ``allow_negative`` then returns the (negative) formal value instead of raising.
    """
    h = p.hbar
    denom = 4 * (p.c_s * h * p.k0) ** 2 - 12 * p.delta**2
    if denom == 0 or not (denom > 0 or allow_negative):
        raise NonPositiveDenominator(
            f"4 c_s^2 hbar^2 k0^2 - 12 Delta^2 = {denom:.6g} J^2 is not positive"
        )
    return h**2 * p.k0**2 * p.delta / denom


def roton_curvature(p: FilmParameters) -> float:
    """E''(k0) in J m^2."""
    return 4 * (p.c_s * p.hbar) ** 2 / p.delta - 12 * p.delta / p.k0**2


def roton_expansion(p: FilmParameters, k):
    """Quadratic approximation Delta + hbar^2 (k - k0)^2 / (2 m_r)."""
    m_r = roton_effective_mass(p)
    dk = np.asarray(k, dtype=float) - p.k0
    return p.delta + p.hbar**2 * dk**2 / (2 * m_r)


def dispersion_table(p: FilmParameters, k_min=0.0, k_max=2.5, n_points=501):
    """Tabulate E/k_B over k in 1/Angstrom. Returns (k, E_K, valid_mask)."""
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if k_max < k_min:
        raise ValueError("k_max must be >= k_min")
    k = np.linspace(k_min, k_max, n_points) if n_points > 1 else np.array([float(k_min)])
    energy, valid = dispersion_table_coefficients(p).energy_kelvin(k)
    return k, energy, valid
