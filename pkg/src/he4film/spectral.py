"""Strang split-step Fourier integrator for the dimensionless film equation

    i Psi_tau = -a0 Psi'' + V Psi,   V = a1 (|Psi|^2 - 1) + a2 (|Psi|^2)'' + a3 (|Psi|^2)''''

on a periodic grid. The kinetic substep is exact in Fourier space; the
potential substep is exact pointwise because it does not change |Psi|^2, so V
stays fixed during it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError, NonFinite
from .fields import FieldState, Grid, is_power_of_two, two_thirds_mask
from .params import DimensionlessCoefficients

#: Fraction of the linear stability limit used by :func:`stable_timestep`.
SAFETY = 0.5
#: Kinetic phase per step allowed by :func:`stable_timestep`.
MAX_KINETIC_PHASE = 0.5


@dataclass(frozen=True)
class SolverConfig:
    n_points: int
    domain_length: float
    dtau: float
    n_steps: int
    output_stride: int = 100
    dealiasing: str = "none"

    def __post_init__(self):
        if not (is_power_of_two(int(self.n_points)) and self.n_points >= 64):
            raise ConfigError("must be a power of two >= 64", field="n_points")
        if not self.domain_length > 0:
            raise ConfigError("must be > 0", field="domain_length")
        if not (math.isfinite(self.dtau) and self.dtau > 0):
            raise ConfigError("must be > 0", field="dtau")
        if self.n_steps < 0:
            raise ConfigError("must be >= 0", field="n_steps")
        if self.output_stride < 1:
            raise ConfigError("must be >= 1", field="output_stride")
        if self.dealiasing not in ("none", "two_thirds"):
            raise ConfigError("must be 'none' or 'two_thirds'", field="dealiasing")

    @property
    def grid(self) -> Grid:
        return Grid(self.n_points, self.domain_length)


@dataclass(frozen=True)
class Observables:
    tau: float
    norm: float
    max_F: float
    min_F: float


def observables(state: FieldState) -> Observables:
    """Norm (spectrally exact rectangle rule) and extrema of F = |Psi|^2 - 1."""
    rho = state.density
    return Observables(
        tau=float(state.tau),
        norm=float(rho.sum() * state.grid.spacing),
        max_F=float(rho.max() - 1.0),
        min_F=float(rho.min() - 1.0),
    )


def stable_timestep(coeffs: DimensionlessCoefficients, grid: Grid, rho_max: float = 1.0,
                    safety: float = SAFETY) -> float:
    """Largest sensible dtau for a grid.

    Two limits are combined: the kinetic phase a0 kmax^2 dtau <= 0.5, and the
    linear stability of the splitting about a uniform density rho_max. For a
    mode kappa with g = a1 - a2 kappa^2 + a3 kappa^4 > 0 the split step stays
    bounded iff rho_max g dtau <= cot(a0 kappa^2 dtau / 2); the kappa^6 growth of
    that term makes it the binding limit on fine grids.
    """
    a0, a1, a2, a3 = coeffs.as_tuple()
    kappa = np.abs(grid.wavenumbers[: grid.n_points // 2 + 1])
    kinetic = MAX_KINETIC_PHASE / (a0 * kappa.max() ** 2)
    g = a1 - a2 * kappa**2 + a3 * kappa**4
    pos = (g > 0) & (kappa > 0)
    if not np.any(pos):
        return kinetic
    gk, k2 = g[pos], a0 * kappa[pos] ** 2

    def unstable(dt):
        theta = k2 * dt
        if np.any(theta >= math.pi):
            return True
        return bool(np.any(rho_max * gk * dt > 1.0 / np.tan(0.5 * theta)))

    lo, hi = 0.0, kinetic * 4
    while not unstable(hi) and hi < 1e6:
        lo, hi = hi, hi * 2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if unstable(mid):
            hi = mid
        else:
            lo = mid
    return min(kinetic, safety * lo)


class SplitStepper:
    """Precomputed multipliers for one (coefficients, grid, dtau, dealiasing)."""

    def __init__(self, coeffs: DimensionlessCoefficients, grid: Grid, dtau: float, dealiasing: str = "none"):
        self.coeffs = coeffs
        self.grid = grid
        self.dtau = dtau
        a0, a1, a2, a3 = coeffs.as_tuple()
        kappa = grid.wavenumbers
        self.mask = two_thirds_mask(grid) if dealiasing == "two_thirds" else None
        half = np.exp(-0.5j * a0 * kappa**2 * dtau)
        if self.mask is not None:
            half = half * self.mask
        self.half_kinetic = half
        kr = kappa[: grid.n_points // 2 + 1]
        mult = -a2 * kr**2 + a3 * kr**4
        if self.mask is not None:
            mult = mult * self.mask[: grid.n_points // 2 + 1]
        self.potential_mult = mult
        self.a1 = a1

    def potential(self, rho):
        return self.a1 * (rho - 1.0) + np.fft.irfft(self.potential_mult * np.fft.rfft(rho), n=self.grid.n_points)

    def __call__(self, psi):
        psi = np.fft.ifft(self.half_kinetic * np.fft.fft(psi))
        rho = psi.real**2 + psi.imag**2
        psi = psi * np.exp(-1j * self.dtau * self.potential(rho))
        return np.fft.ifft(self.half_kinetic * np.fft.fft(psi))


def _check_grid(state: FieldState, cfg: SolverConfig):
    g = state.grid
    if g.n_points != cfg.n_points or not math.isclose(g.domain_length, cfg.domain_length, rel_tol=1e-12):
        raise ConfigError(
            f"state grid (n={g.n_points}, L={g.domain_length:.6g}) does not match the solver config "
            f"(n={cfg.n_points}, L={cfg.domain_length:.6g})", field="grid")


def step(state: FieldState, coeffs: DimensionlessCoefficients, cfg: SolverConfig,
         dtau: float | None = None) -> FieldState:
    """One Strang step. ``dtau`` overrides the config step (negative runs backwards)."""
    _check_grid(state, cfg)
    dt = cfg.dtau if dtau is None else dtau
    psi = SplitStepper(coeffs, state.grid, dt, cfg.dealiasing)(state.psi)
    if not np.all(np.isfinite(psi)):
        raise NonFinite(f"non-finite field after a step from tau = {state.tau:.6g}", step=1, last_good=state)
    return state.evolved(psi, state.tau + dt)


def run(initial: FieldState, coeffs: DimensionlessCoefficients, cfg: SolverConfig, sink=None,
        stop=None):
    """Apply ``cfg.n_steps`` steps. Returns (final state, list of Observables).

    Observables are taken at step 0, every ``output_stride`` steps and at the
    last step; ``sink(state, obs)`` is called with each. ``stop(state, obs)``
    returning true ends the run early at an output point.
    """
    _check_grid(initial, cfg)
    series = []

    def emit(state):
        obs = observables(state)
        series.append(obs)
        if sink is not None:
            sink(state, obs)
        return stop is not None and stop(state, obs)

    if emit(initial) or cfg.n_steps == 0:
        return initial, series
    stepper = SplitStepper(coeffs, initial.grid, cfg.dtau, cfg.dealiasing)
    psi = initial.psi
    last_good = initial
    for n in range(1, cfg.n_steps + 1):
        psi = stepper(psi)
        if not np.all(np.isfinite(psi)):
            raise NonFinite(f"non-finite field at step {n} (tau = {initial.tau + n * cfg.dtau:.6g})",
                            step=n, last_good=last_good)
        if n % cfg.output_stride == 0 or n == cfg.n_steps:
            state = initial.evolved(psi, initial.tau + n * cfg.dtau)
            last_good = state
            if emit(state):
                return state, series
    return last_good, series


# --------------------------------------------------------------------------
# Shape tracking


def _fourier_shift(f, grid: Grid, shift: float):
    """f(xi - shift) for periodic real samples."""
    kr = grid.wavenumbers[: grid.n_points // 2 + 1]
    return np.fft.irfft(np.fft.rfft(f) * np.exp(-1j * kr * shift), n=grid.n_points)


def track_shift(reference, current, grid: Grid) -> float:
    """Displacement d that best maps ``reference`` onto ``current`` (periodic, sub-cell)."""
    corr = np.fft.irfft(np.conj(np.fft.rfft(reference)) * np.fft.rfft(current), n=grid.n_points)
    i = int(np.argmax(corr))
    guess = i * grid.spacing
    if guess > grid.domain_length / 2:
        guess -= grid.domain_length
    h = grid.spacing
    res = minimize_scalar(lambda d: float(np.sum((_fourier_shift(reference, grid, d) - current) ** 2)),
                          bracket=(guess - h, guess, guess + h), tol=1e-12)
    return float(res.x)


def shape_drift(initial: FieldState, current: FieldState):
    """(drift, shift): L-infinity distance between F profiles after the best
    translation, relative to max |F| of the initial profile."""
    f0 = initial.surface
    f1 = current.surface
    d = track_shift(f0, f1, initial.grid)
    aligned = _fourier_shift(f0, initial.grid, d)
    return float(np.max(np.abs(f1 - aligned)) / np.max(np.abs(f0))), d


def default_soliton_config(inverse_width: float, coeffs: DimensionlessCoefficients, n_steps: int = 10_000,
                           widths: float = 40.0, n_points: int = 2048, rho_max: float = 1.0,
                           output_stride: int = 100, dealiasing: str = "none") -> SolverConfig:
    """40 widths, 2048 points, dtau from :func:`stable_timestep`."""
    length = widths / inverse_width
    grid = Grid(n_points, length)
    return SolverConfig(n_points=n_points, domain_length=length,
                        dtau=stable_timestep(coeffs, grid, rho_max), n_steps=n_steps,
                        output_stride=output_stride, dealiasing=dealiasing)


def with_steps(cfg: SolverConfig, n_steps: int, dtau: float | None = None) -> SolverConfig:
    return replace(cfg, n_steps=n_steps, dtau=cfg.dtau if dtau is None else dtau)
