import math

import numpy as np
import pytest

from he4film.errors import UnderResolved
from he4film.fields import Grid
from he4film.solutions import (
    OdeParameters,
    build_cosine_wave,
    build_quartic_soliton,
    cosine_Q_roots,
    cosine_grid,
    cosine_state,
    cosine_threshold_speed,
    dimensionless_cosine,
    ode_parameters,
    quartic_Q_roots,
)
from he4film.verify import (
    amplitude_sweep,
    central_weights,
    fd_derivatives,
    fit_order,
    fornberg_weights,
    ode42_residual,
    ode43_residual,
    pde88_residual,
    periodic_window,
    residual_convergence,
    soliton_window,
)


@pytest.fixture(scope="module")
def soliton(case1, coeffs1):
    return build_quartic_soliton(case1, coeffs1, quartic_Q_roots(case1, coeffs1)[0])


def test_fornberg_known_stencils():
    np.testing.assert_allclose(fornberg_weights(0.0, [-1, 0, 1], 2)[:, 2], [1, -2, 1], atol=1e-14)
    np.testing.assert_allclose(fornberg_weights(0.0, [-1, 0, 1], 1)[:, 1], [-0.5, 0, 0.5], atol=1e-14)
    off, w = central_weights(4, 8)
    assert len(off) == 11
    assert np.sum(w) == pytest.approx(0.0, abs=1e-10)
    assert np.sum(w * off.astype(float) ** 4) / 24 == pytest.approx(1.0, rel=1e-10)


def test_fd8_order():
    """Derivative errors of sin shrink at the nominal eighth order."""
    hs = [0.8, 0.4, 0.2]
    s = np.array([0.3, 1.1])
    errs = {n: [] for n in (1, 2, 4)}
    for h in hs:
        d = fd_derivatives(np.sin, s, h)
        errs[1].append(np.max(np.abs(d[1] - np.cos(s))))
        errs[2].append(np.max(np.abs(d[2] + np.sin(s))))
        errs[4].append(np.max(np.abs(d[4] - np.sin(s))))
    for n in (1, 2, 4):
        assert fit_order(hs, errs[n]) == pytest.approx(8.0, abs=0.5)


def test_zero_profile_zero_residual():
    op = OdeParameters(sigma=1.0, nu=2.0, mu=3.0, Q=4.0, R=5.0, F=0.0, alpha=1.0, C0=0.0, zeta0=1.0)
    rep = ode43_residual(lambda s: np.zeros_like(s), op, Grid(64, 10.0))
    assert rep.max_abs_residual == 0.0 and rep.relative_residual == 0.0 and rep.passed


def test_soliton_gates(soliton):
    grid = soliton_window(soliton)
    assert grid.n_points == 4096
    analytic = ode43_residual(soliton, soliton.ode, grid, method="analytic")
    numeric = ode43_residual(soliton, soliton.ode, grid, method="fd8")
    assert analytic.relative_residual <= 1e-8 and analytic.passed
    assert numeric.relative_residual <= 1e-6 and numeric.passed
    assert analytic.threshold == 1e-8 and numeric.threshold == 1e-6
    d = numeric.to_dict()
    assert d["passed"] and "residual" not in d and d["equation"] == "weak"


def test_under_resolved(soliton):
    with pytest.raises(UnderResolved):
        ode43_residual(soliton, soliton.ode, soliton_window(soliton, n_points=512))


def test_residual_convergence_order(soliton):
    # coarse grids keep the truncation error above round-off; a bare callable
    # skips the points-per-width guard
    half = 10 / soliton.p_or_q
    grids = [Grid(n, 2 * half, -half) for n in (128, 256, 512)]
    rep = residual_convergence(lambda g: ode43_residual(soliton.eta, soliton.ode, g, method="fd8"), grids)
    assert rep.convergence_order == pytest.approx(8.0, abs=0.5)
    assert len(rep.grid_spacings) == 3


def test_cosine_spectral_and_window(case1, coeffs1):
    Q = cosine_Q_roots(case1, coeffs1)[1]
    w = build_cosine_wave(case1, coeffs1, math.sqrt(1.01) * cosine_threshold_speed(case1, Q), Q)
    g = periodic_window(w)
    assert g.n_points >= 64 and g.spacing * w.p_or_q <= 1 / 32
    assert ode43_residual(w, w.ode, g, method="spectral").passed
    # wrong speed: the same profile is no longer a solution
    wrong = ode_parameters(case1, coeffs1, Q, v=cosine_threshold_speed(case1, Q) * 0.5)
    assert not ode43_residual(w, wrong, g, method="spectral").passed


def test_full_equation_flat_profile(case1, coeffs1):
    grid = Grid(64, 1e-8)
    flat = lambda s: np.zeros_like(s)  # noqa: E731
    C0, v = -1e-7, 40.0
    rep = ode42_residual(flat, case1, coeffs1, C0, v, grid)
    const = case1.m * C0**2 / (2 * case1.zeta0**2) - case1.m * v**2 / 2
    np.testing.assert_allclose(rep.residual, const, rtol=1e-14)
    v_eq = abs(C0) / case1.zeta0
    assert ode42_residual(flat, case1, coeffs1, C0, v_eq, grid).max_abs_residual <= 1e-15 * abs(const)


def test_full_equation_linearization(case1, coeffs1):
    """For a tiny smooth eta the full residual is the linear operator acting on eta."""
    z0, m = case1.zeta0, case1.m
    C0 = -1e-7
    v = abs(C0) / z0
    L = 4e-9
    grid = Grid(256, L)
    kq = 2 * math.pi / L
    alpha = case1.hbar**2 / (2 * m)
    lin_coeff = (coeffs1.sigma * kq**4 - (coeffs1.beta - alpha / (2 * z0)) * kq**2
                 - m * C0**2 / z0**3 + coeffs1.G)
    errs = []
    for eps in (1e-4, 1e-5):
        eta = lambda s, e=eps: e * z0 * np.cos(kq * s)  # noqa: E731
        full = ode42_residual(eta, case1, coeffs1, C0, v, grid, method="spectral", inverse_width=kq)
        lin = lin_coeff * eta(grid.xi)
        errs.append(np.max(np.abs(full.residual - lin)) / np.max(np.abs(lin)))
    assert errs[0] < 1e-3
    assert errs[1] / errs[0] == pytest.approx(0.1, rel=0.05)


def test_amplitude_sweep_order(soliton, case1, coeffs1):
    ratios, diffs, order = amplitude_sweep(soliton, case1, coeffs1)
    assert ratios == [0.2, 0.1, 0.05, 0.025]
    assert all(a > b for a, b in zip(diffs, diffs[1:]))
    assert order >= 2.0


def test_pde_residual(dim1):
    g = cosine_grid(1.0, 128)
    flat = lambda tau: cosine_state(dim1, g, tau).evolved(np.ones(128, complex), tau)  # noqa: E731
    assert pde88_residual(flat, dim1, 1e-3).max_abs_residual == 0.0

    q0, _ = dimensionless_cosine(dim1, "minus")
    grid = cosine_grid(q0, 1024, 8)
    rep = pde88_residual(lambda t: cosine_state(dim1, grid, t), dim1, 1e-3)
    assert rep.relative_residual <= 1e-8

    # a 1% frequency error is caught; Psi depends on tau only through exp(-i Omega0 tau)
    rep_bad = pde88_residual(lambda t: cosine_state(dim1, grid, 1.01 * t), dim1, 1e-3)
    assert not rep_bad.passed and 1e-3 < rep_bad.relative_residual < 1e-1

    coarse = Grid(64, 10.0)
    spike = cosine_state(dim1, coarse).evolved(np.sqrt(1 + np.exp(-(coarse.xi / 0.1) ** 2)) + 0j, 0.0)
    with pytest.raises(UnderResolved):
        pde88_residual(lambda t: spike, dim1, 1e-3)
    with pytest.raises(ValueError):
        pde88_residual(lambda t: cosine_state(dim1, grid, t), dim1, 0.0)


def test_fit_order():
    h = np.array([1.0, 0.5, 0.25])
    assert fit_order(h, 3 * h**2) == pytest.approx(2.0)
