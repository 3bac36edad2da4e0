"""Residual oracles for the traveling-wave equations and the dimensionless PDE.

The checks only use a profile and the coefficients of the equation being
tested, never the algebra that produced the profile. Derivatives come from
one of three sources:

* ``"analytic"`` -- closed forms supplied by the profile (``derivatives(s)``);
* ``"fd8"``      -- 8th-order central differences of the callable, sampled
                    past the window edges so no one-sided stencils are needed;
* ``"spectral"`` -- FFT derivatives; the grid must hold whole periods.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NonPositiveThickness, UnderResolved
from .fields import FieldState, Grid, spectral_derivative
from .params import DimensionlessCoefficients, FilmParameters, PhysicalCoefficients

NUMERIC_GATE = 1e-6
ANALYTIC_GATE = 1e-8
MIN_POINTS_PER_WIDTH = 32
FD_ORDER = 8


@dataclass
class ResidualReport:
    equation: str
    method: str
    max_abs_residual: float
    normalization: float
    relative_residual: float
    term_magnitudes: dict
    threshold: float
    grid_spacings: list = field(default_factory=list)
    convergence_order: float | None = None
    residual: np.ndarray | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return bool(self.relative_residual <= self.threshold)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("residual")
        out["passed"] = self.passed
        return out


def _report(equation, method, terms: dict, threshold, spacing, residual=None):
    total = sum(terms.values()) if residual is None else residual
    total = np.broadcast_to(total, np.shape(next(iter(terms.values()))) or (1,))
    mags = {k: float(np.max(np.abs(v))) for k, v in terms.items()}
    max_abs = float(np.max(np.abs(total)))
    norm = max(mags.values())
    rel = max_abs / norm if norm > 0 else 0.0
    return ResidualReport(
        equation=equation, method=method, max_abs_residual=max_abs, normalization=norm,
        relative_residual=rel, term_magnitudes=mags, threshold=threshold,
        grid_spacings=[spacing], residual=np.asarray(total),
    )


def fornberg_weights(z: float, x, m: int) -> np.ndarray:
    """Finite-difference weights at ``z`` on nodes ``x`` for derivatives 0..m.

    Returns an array of shape (len(x), m + 1).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def central_weights(order: int, accuracy: int = FD_ORDER):
    """Integer offsets and weights of the centred stencil for ``order``."""
    half = (order + 1) // 2 + accuracy // 2 - 1
    offsets = np.arange(-half, half + 1)
    return offsets, fornberg_weights(0.0, offsets, order)[:, order]


def fd_derivatives(f, s, h: float, orders=(1, 2, 4), accuracy: int = FD_ORDER):
    """Derivatives of callable ``f`` at points ``s`` with step ``h``."""
    s = np.asarray(s, dtype=float)
    out = {}
    cache = {}
    for n in orders:
        offsets, w = central_weights(n, accuracy)
        acc = np.zeros_like(s)
        for o, wi in zip(offsets, w):
            if wi == 0:
                continue
            if o not in cache:
                cache[o] = np.asarray(f(s + o * h), dtype=float)
            acc += wi * cache[o]
        out[n] = acc / h**n
    return out


def _profile_derivatives(eta, grid: Grid, method: str):
    s = grid.xi
    if method == "analytic":
        if not hasattr(eta, "derivatives"):
            raise ValueError("analytic method needs a profile with a derivatives(s) method")
        d = eta.derivatives(s, order=4)
        return s, d[0], d[1], d[2], d[4]
    e = np.asarray(eta(s), dtype=float)
    if method == "fd8":
        d = fd_derivatives(eta, s, grid.spacing)
        return s, e, d[1], d[2], d[4]
    if method == "spectral":
        return (s, e, spectral_derivative(e, grid, 1), spectral_derivative(e, grid, 2),
                spectral_derivative(e, grid, 4))
    raise ValueError(f"unknown method {method!r}; use 'analytic', 'fd8' or 'spectral'")


def _check_resolution(eta, grid: Grid, inverse_width):
    if inverse_width is None:
        inverse_width = getattr(eta, "p_or_q", None)
    if inverse_width is not None and grid.spacing * abs(inverse_width) > 1.0 / MIN_POINTS_PER_WIDTH:
        raise UnderResolved(
            f"{1.0 / (grid.spacing * abs(inverse_width)):.1f} points per width 1/p; "
            f"need at least {MIN_POINTS_PER_WIDTH}")


def _gate(method, threshold):
    if threshold is not None:
        return threshold
    return ANALYTIC_GATE if method == "analytic" else NUMERIC_GATE


def ode43_residual(eta, op, grid: Grid, method: str = "fd8", threshold: float | None = None,
                   inverse_width: float | None = None) -> ResidualReport:
    """Residual of sigma eta'''' + nu eta'' + 2mu eta eta'' + mu eta'^2 + Q eta^2 + R eta + F.

    ``op`` needs attributes sigma, nu, mu, Q, R, F. ``grid`` is in the same
    length unit as the profile.
    """
    _check_resolution(eta, grid, inverse_width)
    _, e, d1, d2, d4 = _profile_derivatives(eta, grid, method)
    terms = {
        "sigma_eta4": op.sigma * d4,
        "nu_eta2": op.nu * d2,
        "2mu_eta_eta2": 2 * op.mu * e * d2,
        "mu_eta1_sq": op.mu * d1**2,
        "Q_eta_sq": op.Q * e**2,
        "R_eta": op.R * e,
        "F": np.full_like(e, op.F),
    }
    return _report("weak", method, terms, _gate(method, threshold), grid.spacing)


def ode42_residual(eta, p: FilmParameters, c: PhysicalCoefficients, C0: float, v: float, grid: Grid,
                   method: str = "fd8", threshold: float | None = None,
                   inverse_width: float | None = None) -> ResidualReport:
    """Residual of the full (unexpanded) traveling-wave equation for eta."""
    _check_resolution(eta, grid, inverse_width)
    s, e, d1, d2, d4 = _profile_derivatives(eta, grid, method)
    z0, m = p.zeta0, p.m
    alpha = p.hbar**2 / (2 * m)
    zeta = z0 + e
    if np.any(zeta <= 0):
        i = int(np.argmin(zeta))
        raise NonPositiveThickness(f"zeta0 + eta = {zeta[i]:.6g} at s = {s[i]:.6g}")
    k0 = m * C0**2 / (2 * z0**2)
    terms = {
        "sigma_eta4": c.sigma * d4,
        "beta_eta2": c.beta * d2,
        "quantum_eta2": -alpha / (2 * zeta) * d2,
        "quantum_eta1_sq": alpha / (4 * zeta**2) * d1**2,
        "flow": -k0 * (2 * z0 * e + e**2) / zeta**2,
        "G_eta": c.G * e,
        "constant": np.full_like(e, k0 - m * v**2 / 2),
    }
    return _report("full", method, terms, _gate(method, threshold), grid.spacing)


def pde88_residual(state_at, coeffs: DimensionlessCoefficients, dtau: float, tau: float = 0.0,
                   threshold: float = ANALYTIC_GATE, tail_tol: float = 1e-8) -> ResidualReport:
    """Residual of i Psi_tau = -a0 Psi'' + a1 (|Psi|^2 - 1) Psi + a2 (|Psi|^2)'' Psi + a3 (|Psi|^2)'''' Psi.

    ``state_at`` maps tau to a :class:`FieldState`; the time derivative is the
    fourth-order centred difference on tau + {-2,-1,1,2} dtau, space derivatives are spectral.
    """
    if not dtau > 0:
        raise ValueError("dtau must be > 0")
    mid = state_at(tau)
    grid = mid.grid
    psi = mid.psi
    rho = mid.density
    spec = np.abs(np.fft.rfft(rho))
    kappa = np.abs(grid.wavenumbers[: len(spec)])
    tail = spec[kappa > (2.0 / 3.0) * grid.k_max]
    if tail.size and tail.max() > tail_tol * spec.max():
        raise UnderResolved(f"|Psi|^2 spectrum tail {tail.max() / spec.max():.2g} exceeds {tail_tol:g}")
    a0, a1, a2, a3 = coeffs.as_tuple()
    # fourth-order central difference
    dpsi = (8 * (state_at(tau + dtau).psi - state_at(tau - dtau).psi)
            - (state_at(tau + 2 * dtau).psi - state_at(tau - 2 * dtau).psi)) / (12 * dtau)
    terms = {
        "i_psi_tau": 1j * dpsi,
        "kinetic": a0 * spectral_derivative(psi, grid, 2),
        "a1": -a1 * (rho - 1) * psi,
        "a2": -a2 * spectral_derivative(rho, grid, 2) * psi,
        "a3": -a3 * spectral_derivative(rho, grid, 4) * psi,
    }
    return _report("dimensionless", "spectral", terms, threshold, grid.spacing)


# --------------------------------------------------------------------------
# Convergence


def fit_order(spacings, errors) -> float:
    """Least-squares slope of log(error) against log(spacing)."""
    h = np.log(np.asarray(spacings, dtype=float))
    e = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(h, e, 1)[0])


def residual_convergence(evaluate, grids) -> ResidualReport:
    """Run ``evaluate(grid) -> ResidualReport`` on several grids.

    Returns the finest report with all spacings attached and, with three or
    more grids, the fitted order of max_abs_residual.
    """
    reports = [evaluate(g) for g in grids]
    spacings = [g.spacing for g in grids]
    finest = min(reports, key=lambda r: r.grid_spacings[0])
    finest.grid_spacings = spacings
    if len(grids) >= 3:
        finest.convergence_order = fit_order(spacings, [r.max_abs_residual for r in reports])
    return finest


def soliton_window(sol, n_points: int = 4096, half_widths: float = 20.0) -> Grid:
    """Grid over s0 +- half_widths/p, the default window for decaying profiles."""
    half = half_widths / sol.p_or_q
    return Grid(n_points, 2 * half, sol.s0 - half)


def periodic_window(sol, n_points: int | None = None, n_periods: int = 2) -> Grid:
    """Grid holding whole periods of a periodic profile, for spectral derivatives.

    By default n_points is the smallest power of two giving the minimum
    resolution; finer grids only add round-off to the fourth derivative.
    """
    length = n_periods * sol.period
    if n_points is None:
        need = max(64.0, MIN_POINTS_PER_WIDTH * sol.p_or_q * length)
        n_points = 2 ** math.ceil(math.log2(need))
    return Grid(n_points, length, sol.s0 - 0.5 * length)


def amplitude_sweep(sol, p: FilmParameters, c: PhysicalCoefficients,
                    ratios=(0.2, 0.1, 0.05, 0.025), n_points: int | None = None):
    """Max |full - weak| residual difference for eta = ratio*zeta0*shape(s).

    The shape, C0 and v are taken from ``sol``; only the amplitude changes.
    Returns (ratios, differences, fitted order).
    """
    from dataclasses import replace

    grid = periodic_window(sol, n_points) if sol.is_periodic else soliton_window(sol, n_points or 4096)
    diffs = []
    for r in ratios:
        scaled = replace(sol, amplitude=math.copysign(r * p.zeta0, sol.amplitude))
        weak = ode43_residual(scaled, sol.ode, grid, method="analytic")
        full = ode42_residual(scaled, p, c, sol.C0, sol.v, grid, method="analytic")
        diffs.append(float(np.max(np.abs(full.residual - weak.residual))))
    return list(ratios), diffs, fit_order(ratios, diffs)
