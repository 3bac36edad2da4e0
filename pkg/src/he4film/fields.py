"""Periodic 1D grids, complex field states and spectral derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .params import DimensionlessCoefficients


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid of ``n_points`` cells on ``[origin, origin + L)``.

    The origin defaults to ``-L/2`` so the grid is centred on zero.
    """

    n_points: int
    domain_length: float
    origin: float | None = None

    def __post_init__(self):
        if not is_power_of_two(int(self.n_points)):
            raise ValueError(f"n_points must be a power of two, got {self.n_points}")
        if not self.domain_length > 0:
            raise ValueError("domain_length must be > 0")
        if self.origin is None:
            object.__setattr__(self, "origin", -0.5 * self.domain_length)

    @property
    def spacing(self) -> float:
        return self.domain_length / self.n_points

    @property
    def xi(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)

    @property
    def k_max(self) -> float:
        return np.pi / self.spacing


@dataclass(frozen=True, eq=False)
class FieldState:
    """Samples of the dimensionless field Psi(xi) at time tau."""

    grid: Grid
    tau: float
    psi: np.ndarray
    scales: DimensionlessCoefficients | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        if psi.shape != (self.grid.n_points,):
            raise ValueError(f"psi has shape {psi.shape}, grid expects ({self.grid.n_points},)")
        object.__setattr__(self, "psi", psi)

    @property
    def density(self) -> np.ndarray:
        return self.psi.real**2 + self.psi.imag**2

    @property
    def surface(self) -> np.ndarray:
        """Relative thickness deviation |Psi|^2 - 1."""
        return self.density - 1.0

    def evolved(self, psi, tau) -> "FieldState":
        return replace(self, psi=psi, tau=tau)

    def shifted(self, cells: int) -> "FieldState":
        return replace(self, psi=np.roll(self.psi, cells))


def spectral_derivative(f, grid: Grid, order: int, mask=None):
    """``order``-th derivative of periodic samples ``f`` by FFT.

    Real input gives real output. The Nyquist mode is dropped for odd orders.
    """
    f = np.asarray(f)
    if np.isrealobj(f):
        kappa = grid.wavenumbers[: grid.n_points // 2 + 1].copy()
        mult = (1j * kappa) ** order
        if order % 2:
            mult[-1] = 0.0
        if mask is not None:
            mult = mult * mask[: grid.n_points // 2 + 1]
        return np.fft.irfft(mult * np.fft.rfft(f), n=grid.n_points)
    kappa = grid.wavenumbers
    mult = (1j * kappa) ** order
    if order % 2:
        mult[grid.n_points // 2] = 0.0
    if mask is not None:
        mult = mult * mask
    return np.fft.ifft(mult * np.fft.fft(f))


def two_thirds_mask(grid: Grid) -> np.ndarray:
    kappa = np.abs(grid.wavenumbers)
    return (kappa <= (2.0 / 3.0) * grid.k_max).astype(float)
