"""Analytic traveling waves of the weakly excited film equation.

Writing zeta = zeta0 + eta(s) with s = x - v t, the surface deviation obeys

    sigma eta'''' + nu eta'' + 2 mu eta eta'' + mu eta'^2 + Q eta^2 + R eta + F = 0

with nu = beta - alpha/(2 zeta0), mu = alpha/(4 zeta0^2), alpha = hbar^2/(2m),
Q = 3 m C0^2/(2 zeta0^4), R = G - (2/3) zeta0 Q and F = m C0^2/(2 zeta0^2) - m v^2/2.
Three closed-form families solve it: A sech^2 (bright or dark soliton),
B cos (periodic, free speed) and D cn^2 (cnoidal). Each builder takes an
explicit root Q of the family's quadratic; the solvers list the admissible
roots.

The phase follows from the continuity equation,
Theta' = m v + m C0 / zeta, and is integrated numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad

from .elliptic import EllipticModulus, complete_elliptic_K, jacobi_sncndn, sech
from .errors import (
    InfeasibleQ,
    ModulusSingular,
    NegativeQ0Squared,
    NonPositiveThickness,
    NoPositiveQ,
    NoRealRoot,
    SigmaZero,
    SubcriticalVelocity,
)
from .fields import FieldState, Grid
from .params import (
    DimensionlessCoefficients,
    FilmParameters,
    PhysicalCoefficients,
    dimensionless_coefficients,
)

#: |amplitude| / zeta0 above which a solution is flagged as extrapolated.
WEAK_EXCITATION_LIMIT = 0.2

#: Smallest |2k^2 - 1| accepted by the cnoidal builder.
SINGULAR_TOL = 1e-3

#: Relative tolerance of the internal consistency checks in the builders.
CONSISTENCY_TOL = 1e-10


class WaveKind(str, enum.Enum):
    QUARTIC_SOLITON = "QuarticSoliton"
    DARK_QUARTIC_SOLITON = "DarkQuarticSoliton"
    COSINE = "Cosine"
    ELLIPTIC_CN2 = "EllipticCn2"


@dataclass(frozen=True)
class OdeParameters:
    """Coefficients of the weakly excited traveling-wave equation (SI)."""

    sigma: float
    nu: float
    mu: float
    Q: float
    R: float
    F: float
    alpha: float
    C0: float
    zeta0: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be > 0")
        if self.Q < 0:
            raise ValueError("Q must be >= 0")


def ode_base(p: FilmParameters, c: PhysicalCoefficients):
    """(sigma, nu, mu, alpha): the part of the coefficients independent of C0."""
    alpha = p.hbar**2 / (2 * p.m)
    nu = c.beta - alpha / (2 * p.zeta0)
    mu = alpha / (4 * p.zeta0**2)
    return c.sigma, nu, mu, alpha


def c0_magnitude(p: FilmParameters, Q: float) -> float:
    """|C0| from Q = 3 m C0^2 / (2 zeta0^4)."""
    return p.zeta0**2 * math.sqrt(2 * Q / (3 * p.m))


def ode_parameters(p: FilmParameters, c: PhysicalCoefficients, Q: float, v: float | None = None,
                   c0_sign: int = -1) -> OdeParameters:
    """Assemble the coefficients for a given Q.

    ``v`` defaults to |C0|/zeta0, which makes F vanish (solitary-wave case).
    """
    if Q < 0:
        raise InfeasibleQ(f"Q = {Q:.6g} is negative", condition="Q > 0")
    sigma, nu, mu, alpha = ode_base(p, c)
    C0 = _sign(c0_sign) * c0_magnitude(p, Q)
    if v is None:
        v = abs(C0) / p.zeta0
    z0, m = p.zeta0, p.m
    return OdeParameters(
        sigma=sigma,
        nu=nu,
        mu=mu,
        Q=Q,
        R=c.G - 2 * z0 * Q / 3,
        F=m * C0**2 / (2 * z0**2) - m * v**2 / 2,
        alpha=alpha,
        C0=C0,
        zeta0=z0,
    )


def _sign(s) -> int:
    if s not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {s!r}")
    return int(s)


def _quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Real roots of a x^2 + b x + c, ascending, without cancellation."""
    if a == 0:
        return [] if b == 0 else [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    qq = -0.5 * (b + math.copysign(sq, b))
    roots = [qq / a] if qq == 0 else [qq / a, c / qq]
    polished = []
    for x in roots:
        d = 2 * a * x + b
        if d != 0:
            x = x - (a * x * x + b * x + c) / d
        polished.append(x)
    return sorted(polished)


def _rel_residual(terms) -> float:
    terms = [float(t) for t in terms]
    scale = max(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale > 0 else 0.0


# --------------------------------------------------------------------------
# Solution value type


@dataclass(frozen=True)
class TravelingWaveSolution:
    """One analytic traveling wave. Lengths in m, speeds in m/s, C0 in m^2/s."""

    kind: WaveKind
    amplitude: float
    p_or_q: float
    Q: float
    C0: float
    v: float
    zeta0: float
    ode: OdeParameters
    modulus: float | None = None
    s0: float = 0.0
    theta0: float = 0.0
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def relative_amplitude(self) -> float:
        return self.amplitude / self.zeta0

    @property
    def weak_excitation(self) -> bool:
        return abs(self.relative_amplitude) <= WEAK_EXCITATION_LIMIT

    @property
    def is_periodic(self) -> bool:
        return self.kind in (WaveKind.COSINE, WaveKind.ELLIPTIC_CN2)

    @property
    def period(self) -> float:
        """Spatial period of eta (inf for solitons)."""
        if self.kind is WaveKind.COSINE:
            return 2 * math.pi / self.p_or_q
        if self.kind is WaveKind.ELLIPTIC_CN2:
            return 2 * complete_elliptic_K(self.modulus) / self.p_or_q
        return math.inf

    def eta(self, s):
        return self.derivatives(s, order=0)[0]

    __call__ = eta

    def derivatives(self, s, order: int = 4):
        """Closed-form (eta, eta', eta'', eta''', eta'''') up to ``order``."""
        z = self.p_or_q * (np.asarray(s, dtype=float) - self.s0)
        k = self.p_or_q
        if self.kind is WaveKind.COSINE:
            c, sn = np.cos(z), np.sin(z)
            base = [c, -sn, -c, sn, c]
        else:
            kk = 1.0 if self.modulus is None else self.modulus
            sn, cn, dn = jacobi_sncndn(z, kk)
            C = cn * cn
            d1 = -2 * sn * cn * dn
            lin = 4 * (2 * kk**2 - 1) - 12 * kk**2 * C
            d2 = 2 * (1 - kk**2) + 4 * (2 * kk**2 - 1) * C - 6 * kk**2 * C**2
            d3 = lin * d1
            d4 = -12 * kk**2 * d1**2 + lin * d2
            base = [C, d1, d2, d3, d4]
        return [self.amplitude * k**n * base[n] for n in range(order + 1)]

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "amplitude_m": self.amplitude,
            "relative_amplitude": self.relative_amplitude,
            "p_or_q_per_m": self.p_or_q,
            "modulus": self.modulus,
            "Q": self.Q,
            "C0_m2_per_s": self.C0,
            "v_m_per_s": self.v,
            "zeta0_m": self.zeta0,
            "s0_m": self.s0,
            "theta0": self.theta0,
            "weak_excitation": self.weak_excitation,
            "validity": "valid" if self.weak_excitation else "extrapolated",
            "ode": asdict(self.ode),
            "diagnostics": dict(self.diagnostics),
        }
        if self.is_periodic:
            out["period_m"] = self.period
        return out


# --------------------------------------------------------------------------
# Quartic soliton


def solve_quartic_Q(sigma: float, nu: float, mu: float, G: float, zeta0: float) -> list[float]:
    """Roots of (sigma/mu^2) Q^2 - (3nu/(5mu) + 2zeta0/3) Q + G - 4nu^2/(25 sigma) = 0
    with Q > 0 and Q/(4mu) - nu/(5sigma) > 0."""
    if sigma == 0:
        raise SigmaZero("sigma = 0: the soliton quadratic in Q degenerates")
    roots = _quadratic_roots(
        sigma / mu**2,
        -(3 * nu / (5 * mu) + 2 * zeta0 / 3),
        G - 4 * nu**2 / (25 * sigma),
    )
    return [Q for Q in roots if Q > 0 and Q / (4 * mu) - nu / (5 * sigma) > 0]


def quartic_Q_roots(p: FilmParameters, c: PhysicalCoefficients) -> list[float]:
    sigma, nu, mu, _ = ode_base(p, c)
    return solve_quartic_Q(sigma, nu, mu, c.G, p.zeta0)


def build_quartic_soliton(p: FilmParameters, c: PhysicalCoefficients, Q: float, *,
                          velocity_sign: int = 1, c0_sign: int = -1,
                          s0: float = 0.0, theta0: float = 0.0) -> TravelingWaveSolution:
    """A sech^2(p (s - s0)); dark when A < 0.

    ``c0_sign = -1`` with ``velocity_sign = +1`` gives C0 = -v zeta0, i.e. a
    fluid at rest far from the soliton.
    """
    sigma, nu, mu, _ = ode_base(p, c)
    if sigma == 0:
        raise SigmaZero("sigma = 0: the soliton amplitude is undefined")
    if not Q > 0:
        raise InfeasibleQ(f"Q = {Q:.6g} is not positive", condition="Q > 0")
    p2 = Q / (4 * mu) - nu / (5 * sigma)
    if not p2 > 0:
        raise InfeasibleQ(f"p^2 = Q/(4 mu) - nu/(5 sigma) = {p2:.6g} is not positive",
                          condition="Q/(4 mu) - nu/(5 sigma) > 0")
    ode = ode_parameters(p, c, Q, c0_sign=c0_sign)
    res = _rel_residual([16 * sigma * p2**2, 4 * nu * p2, ode.R])
    if res > CONSISTENCY_TOL:
        raise InfeasibleQ(f"Q = {Q:.6g} is not a root of the soliton quadratic "
                          f"(relative mismatch {res:.3g})", condition="quadratic root")
    A = 15 * sigma * Q / (8 * mu**2) - 3 * nu / (2 * mu)
    v = _sign(velocity_sign) * abs(ode.C0) / p.zeta0
    kind = WaveKind.QUARTIC_SOLITON if A > 0 else WaveKind.DARK_QUARTIC_SOLITON
    return TravelingWaveSolution(
        kind=kind, amplitude=A, p_or_q=math.sqrt(p2), Q=Q, C0=ode.C0, v=v,
        zeta0=p.zeta0, ode=ode, s0=s0, theta0=theta0,
        diagnostics={"width_relation_residual": res},
    )


# --------------------------------------------------------------------------
# Cosine wave


def solve_cosine_Q(sigma: float, nu: float, mu: float, G: float, zeta0: float) -> list[float]:
    """Positive roots of (sigma/(3mu^2)) Q^2 - (nu/mu + 2 zeta0) Q + 3G = 0."""
    roots = _quadratic_roots(sigma / (3 * mu**2), -(nu / mu + 2 * zeta0), 3 * G)
    return [Q for Q in roots if Q > 0]


def cosine_Q_roots(p: FilmParameters, c: PhysicalCoefficients) -> list[float]:
    sigma, nu, mu, _ = ode_base(p, c)
    return solve_cosine_Q(sigma, nu, mu, c.G, p.zeta0)


def cosine_threshold_speed(p: FilmParameters, Q: float) -> float:
    """v0 = zeta0 sqrt(2Q/(3m)); cosine waves need |v| > v0."""
    return p.zeta0 * math.sqrt(2 * Q / (3 * p.m))


def _pick_root(roots, Q, what):
    if Q is not None:
        return Q
    if not roots:
        raise NoPositiveQ(f"the {what} quadratic in Q has no admissible root")
    if len(roots) > 1:
        raise InfeasibleQ(f"the {what} quadratic has {len(roots)} admissible roots "
                          f"{['%.6g' % r for r in roots]}; pass Q explicitly", condition="root choice")
    return roots[0]


def build_cosine_wave(p: FilmParameters, c: PhysicalCoefficients, v: float, Q: float | None = None, *,
                      amplitude_sign: int = 1, c0_sign: int = -1,
                      s0: float = 0.0, theta0: float = 0.0) -> TravelingWaveSolution:
    """B cos(q (s - s0)) at speed v, with q^2 = Q/(3 mu) and
    B = +-zeta0 sqrt(v^2/v0^2 - 1). ``Q`` defaults to the single positive root."""
    sigma, nu, mu, _ = ode_base(p, c)
    Q = _pick_root(solve_cosine_Q(sigma, nu, mu, c.G, p.zeta0), Q, "cosine")
    if not Q > 0:
        raise NoPositiveQ(f"Q = {Q:.6g} is not positive")
    res = _rel_residual([sigma * Q**2 / (3 * mu**2), -(nu / mu + 2 * p.zeta0) * Q, 3 * c.G])
    if res > CONSISTENCY_TOL:
        raise InfeasibleQ(f"Q = {Q:.6g} is not a root of the cosine quadratic "
                          f"(relative mismatch {res:.3g})", condition="quadratic root")
    v0 = cosine_threshold_speed(p, Q)
    ratio = (v / v0) ** 2 - 1
    if ratio < 0:
        raise SubcriticalVelocity(f"|v| = {abs(v):.6g} m/s is below the threshold v0 = {v0:.6g} m/s")
    B = _sign(amplitude_sign) * p.zeta0 * math.sqrt(ratio)
    ode = ode_parameters(p, c, Q, v=v, c0_sign=c0_sign)
    q2 = Q / (3 * mu)
    return TravelingWaveSolution(
        kind=WaveKind.COSINE, amplitude=B, p_or_q=math.sqrt(q2), Q=Q, C0=ode.C0, v=v,
        zeta0=p.zeta0, ode=ode, s0=s0, theta0=theta0,
        diagnostics={
            "threshold_speed": v0,
            "speed_excess": math.sqrt(ratio),
            "constant_term_residual": _rel_residual([mu * q2 * B**2, ode.F]),
            "linear_term_residual": _rel_residual([sigma * q2**2, -nu * q2, ode.R]),
        },
    )


# --------------------------------------------------------------------------
# Cnoidal (cn^2) wave


def _check_modulus(k) -> float:
    k = float(EllipticModulus(float(k)))
    if not 0 < k < 1:
        raise InfeasibleQ(f"modulus must satisfy 0 < k < 1, got {k!r}", condition="0 < k < 1")
    if abs(2 * k * k - 1) < SINGULAR_TOL:
        raise ModulusSingular(f"2k^2 - 1 = {2 * k * k - 1:.3g} is too close to 0 (k = {k!r})")
    return k


def _elliptic_quadratic(sigma, nu, mu, G, zeta0, k):
    e = 2 * k * k - 1
    w = 4 - 19 * k**2 + 19 * k**4
    a2 = 4 * sigma * w / e**2  # coefficient of P^2, P = Q/(4mu) - nu/(5 sigma)
    return (
        a2 / (16 * mu**2),
        -a2 * nu / (10 * sigma * mu) + nu / mu - 2 * zeta0 / 3,
        a2 * nu**2 / (25 * sigma**2) - 4 * nu**2 / (5 * sigma) + G,
    )


def solve_elliptic_Q(sigma: float, nu: float, mu: float, G: float, zeta0: float, k: float) -> list[float]:
    """Admissible roots Q of the cnoidal quadratic at modulus k: Q > 0 and p^2 > 0."""
    if sigma == 0:
        raise SigmaZero("sigma = 0: the cnoidal quadratic in Q degenerates")
    k = _check_modulus(k)
    coeffs = _elliptic_quadratic(sigma, nu, mu, G, zeta0, k)
    roots = _quadratic_roots(*coeffs)
    if not roots:
        raise NoRealRoot(f"the cnoidal quadratic in Q has no real root at k = {k}")
    e = 2 * k * k - 1
    return [Q for Q in roots if Q > 0 and (Q / (4 * mu) - nu / (5 * sigma)) / e > 0]


def elliptic_Q_roots(p: FilmParameters, c: PhysicalCoefficients, k: float) -> list[float]:
    sigma, nu, mu, _ = ode_base(p, c)
    return solve_elliptic_Q(sigma, nu, mu, c.G, p.zeta0, k)


def build_elliptic_wave(p: FilmParameters, c: PhysicalCoefficients, modulus, Q: float | None = None, *,
                        velocity_sign: int = 1, c0_sign: int = -1,
                        s0: float = 0.0, theta0: float = 0.0) -> TravelingWaveSolution:
    """D cn^2(p (s - s0), k).

    D and p^2 follow from Q; the speed comes from the constant-term condition.
    The remaining relations are evaluated as residuals and stored in
    ``diagnostics``; they are never used to adjust the parameters.
    """
    k = _check_modulus(modulus)
    sigma, nu, mu, _ = ode_base(p, c)
    if Q is None:
        Q = _pick_root(solve_elliptic_Q(sigma, nu, mu, c.G, p.zeta0, k), None, "cnoidal")
    if sigma == 0:
        raise SigmaZero("sigma = 0: the cnoidal amplitude is undefined")
    if not Q > 0:
        raise InfeasibleQ(f"Q = {Q:.6g} is not positive", condition="Q > 0")
    e = 2 * k * k - 1
    kp2 = 1 - k * k
    p2 = (Q / (4 * mu) - nu / (5 * sigma)) / e
    if not p2 > 0:
        raise InfeasibleQ(f"p^2 = {p2:.6g} is not positive", condition="(Q/(4 mu) - nu/(5 sigma))/(2k^2 - 1) > 0")
    D = 15 * sigma * k**2 * Q / (8 * mu**2 * e) - 3 * nu * k**2 / (2 * mu * e)
    z0, m = p.zeta0, p.m
    R = c.G - 2 * z0 * Q / 3
    quad_res = _rel_residual([t * f for t, f in zip(_elliptic_quadratic(sigma, nu, mu, c.G, z0, k), (Q * Q, Q, 1.0))])
    if quad_res > CONSISTENCY_TOL:
        raise InfeasibleQ(f"Q = {Q:.6g} is not a root of the cnoidal quadratic "
                          f"(relative mismatch {quad_res:.3g})", condition="quadratic root")
    half_mv2 = 8 * sigma * D * p2**2 * e * kp2 + 2 * nu * D * p2 * kp2 + z0**2 * Q / 3
    if not half_mv2 > 0:
        raise InfeasibleQ(f"the speed condition gives v^2 = {2 * half_mv2 / m:.6g} <= 0", condition="v^2 > 0")
    v = _sign(velocity_sign) * math.sqrt(2 * half_mv2 / m)
    ode = ode_parameters(p, c, Q, v=v, c0_sign=c0_sign)
    diagnostics = {
        "quadratic_residual": quad_res,
        "width_amplitude_residual": _rel_residual([p2, -2 * mu * D / (15 * sigma * k**2)]),
        "linear_term_residual": _rel_residual(
            [8 * sigma * p2**2 * (2 - 17 * k**2 + 17 * k**4), 4 * nu * p2 * e, 8 * mu * D * p2 * kp2, R]),
        "reduced_linear_term_residual": _rel_residual(
            [4 * sigma * p2**2 * (4 - 19 * k**2 + 19 * k**4), 4 * nu * p2 * e, c.G, -2 * z0 * Q / 3]),
        "quadratic_term_residual": _rel_residual(
            [-120 * sigma * p2**2 * k**2 * e, -6 * nu * p2 * k**2, 12 * mu * D * p2 * e, D * Q]),
        "constant_term_residual": _rel_residual(
            [8 * sigma * D * p2**2 * e * kp2, 2 * nu * D * p2 * kp2, z0**2 * Q / 3, -m * v**2 / 2]),
    }
    return TravelingWaveSolution(
        kind=WaveKind.ELLIPTIC_CN2, amplitude=D, p_or_q=math.sqrt(p2), Q=Q, C0=ode.C0, v=v,
        zeta0=z0, ode=ode, modulus=k, s0=s0, theta0=theta0, diagnostics=diagnostics,
    )


# --------------------------------------------------------------------------
# Phase and field


def phase_profile(sol: TravelingWaveSolution, p: FilmParameters, s, s_ref: float | None = None):
    """Theta(s) = theta0 + m v (s - s_ref) + m C0 int_{s_ref}^{s} ds'/zeta(s').

    ``s`` must be increasing. The integral of 1/zeta - 1/zeta0 is done by the
    cumulative trapezoid rule on ``s``; ``s_ref`` defaults to ``s[0]``.
    """
    s = np.asarray(s, dtype=float)
    z0 = sol.zeta0
    zeta = z0 + sol.eta(s)
    if np.any(zeta <= 0):
        i = int(np.argmin(zeta))
        raise NonPositiveThickness(f"zeta0 + eta = {zeta[i]:.6g} m at s = {s[i]:.6g} m")

    def excess(x):
        return 1.0 / (z0 + sol.eta(x)) - 1.0 / z0

    integral = cumulative_trapezoid(1.0 / zeta - 1.0 / z0, s, initial=0.0)
    if s_ref is None:
        s_ref = float(s[0])
    elif s_ref != s[0]:
        if not z0 + float(sol.eta(s_ref)) > 0:
            raise NonPositiveThickness("zeta0 + eta <= 0 at the reference point")
        # the integrand is O(|eta|/zeta0^2) and may average to ~0 over periods,
        # so an absolute tolerance on that scale is needed besides epsrel
        scale = abs(float(s_ref) - float(s[0])) * float(np.max(np.abs(zeta - z0))) / z0**2
        offset, _ = quad(excess, float(s[0]), float(s_ref), limit=400, epsabs=1e-14 * scale, epsrel=1e-13)
        integral = integral - offset
    m = p.m
    return sol.theta0 + m * (sol.v + sol.C0 / z0) * (s - s_ref) + m * sol.C0 * integral


def materialize(sol: TravelingWaveSolution, p: FilmParameters, grid: Grid, tau: float = 0.0, *,
                coeffs: DimensionlessCoefficients | None = None, wrap_phase: bool = False,
                allow_extrapolated: bool = False) -> FieldState:
    """Sample Psi(xi, tau) = zeta0^{-1/2} psi(x, t) on ``grid``.

    x = xi * l_scale and t = tau * delta_scale. The phase is referenced to the
    wave centre s0, so states at different tau differ by a translation only.

    ``wrap_phase`` subtracts the linear phase ramp that makes Psi periodic on
    the grid. The equation is Galilean invariant, so the result is the same
    wave seen from a frame moving at ``meta["boost"]`` (dimensionless).
    """
    if not (sol.weak_excitation or allow_extrapolated):
        raise InfeasibleQ(
            f"|amplitude|/zeta0 = {abs(sol.relative_amplitude):.3g} exceeds {WEAK_EXCITATION_LIMIT}; "
            "pass allow_extrapolated=True to materialize anyway", condition="weak excitation")
    if coeffs is None:
        coeffs = dimensionless_coefficients(p)
    l, d = coeffs.l_scale, coeffs.delta_scale
    t = tau * d
    xi = grid.xi
    s = np.append(xi, xi[-1] + grid.spacing) * l - sol.v * t
    theta = phase_profile(sol, p, s, s_ref=sol.s0) / p.hbar
    rho = 1.0 + sol.eta(s[:-1]) / sol.zeta0
    meta = {"kind": sol.kind.value, "velocity": sol.v * d / l, "boost": 0.0, "phase_ramp": 0.0}
    if wrap_phase:
        jump = theta[-1] - theta[0]
        jump -= 2 * math.pi * round(jump / (2 * math.pi))
        slope = jump / grid.domain_length
        theta = theta[:-1] - slope * (xi - xi[0])
        meta["phase_ramp"] = slope
        meta["boost"] = -2 * coeffs.a0 * slope
    else:
        theta = theta[:-1]
    psi = np.sqrt(rho) * np.exp(1j * theta)
    return FieldState(grid=grid, tau=tau, psi=psi, scales=coeffs, meta=meta)


def soliton_grid(sol: TravelingWaveSolution, coeffs: DimensionlessCoefficients,
                 n_points: int = 2048, widths: float = 40.0) -> Grid:
    """Centred grid spanning ``widths`` soliton widths 1/p (dimensionless)."""
    width = 1.0 / (sol.p_or_q * coeffs.l_scale)
    return Grid(n_points, widths * width)


# --------------------------------------------------------------------------
# Dimensionless states


def dimensionless_cosine(coeffs: DimensionlessCoefficients, branch: str = "minus"):
    """(q0, Omega0) for Psi = sqrt(1 + cos(q0 xi)) exp(-i Omega0 tau).

    q0^2 solves a3 q^4 - a2 q^2 + a1 = 0 ("plus" picks the larger root) and
    Omega0 = a0 q0^2 / 4.
    """
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    a0, a1, a2, a3 = coeffs.as_tuple()
    if a3 == 0:
        if a2 == 0:
            raise NoRealRoot("a2 = a3 = 0: no q0 solves the dispersion condition")
        q2 = a1 / a2
    else:
        disc = a2 * a2 - 4 * a1 * a3
        if disc < 0:
            raise NoRealRoot(f"a2^2 - 4 a1 a3 = {disc:.6g} < 0")
        sq = math.sqrt(disc)
        big = 0.5 * (a2 + math.copysign(sq, a2))
        roots = sorted([big / a3, a1 / big] if big != 0 else [0.0])
        q2 = roots[-1] if branch == "plus" else roots[0]
    if not q2 > 0:
        raise NegativeQ0Squared(f"q0^2 = {q2:.6g} on the {branch} branch")
    return math.sqrt(q2), 0.25 * a0 * q2


def cosine_grid(q0: float, n_points: int = 1024, n_periods: int = 1) -> Grid:
    """Periodic grid holding ``n_periods`` periods 4 pi / q0 of Psi (two of |Psi|^2)."""
    return Grid(n_points, n_periods * 4 * math.pi / q0)


def cosine_state(coeffs: DimensionlessCoefficients, grid: Grid, tau: float = 0.0, branch: str = "minus",
                 xi0: float = 0.0) -> FieldState:
    """Exact cosine solution on the smooth branch sqrt(2) cos(q0 (xi - xi0)/2) e^{-i Omega0 tau}.

    |Psi|^2 = 1 + cos(q0 (xi - xi0)). The grid must hold a whole number of
    periods 4 pi / q0.
    """
    q0, omega0 = dimensionless_cosine(coeffs, branch)
    psi = math.sqrt(2) * np.cos(0.5 * q0 * (grid.xi - xi0)) * np.exp(-1j * omega0 * tau)
    return FieldState(grid=grid, tau=tau, psi=psi, scales=coeffs,
                      meta={"kind": "DimensionlessCosine", "q0": q0, "Omega0": omega0, "branch": branch})


def modulated_state(grid: Grid, q0: float, epsilon: float, tau: float = 0.0,
                    coeffs: DimensionlessCoefficients | None = None) -> FieldState:
    """Psi = sqrt(1 + epsilon cos(q0 xi)), a smooth input for |epsilon| < 1."""
    if not abs(epsilon) < 1:
        raise ValueError("|epsilon| must be < 1")
    psi = np.sqrt(1 + epsilon * np.cos(q0 * grid.xi))
    return FieldState(grid=grid, tau=tau, psi=psi, scales=coeffs,
                      meta={"kind": "Modulated", "q0": q0, "epsilon": epsilon})


def sech2_state(grid: Grid, amplitude: float, inverse_width: float, center: float = 0.0,
                coeffs: DimensionlessCoefficients | None = None) -> FieldState:
    """Real input Psi = sqrt(1 + amplitude sech^2(inverse_width (xi - center)))."""
    if not amplitude > -1:
        raise NonPositiveThickness("amplitude must exceed -1 for a positive film thickness")
    rho = 1 + amplitude * sech(inverse_width * (grid.xi - center)) ** 2
    return FieldState(grid=grid, tau=0.0, psi=np.sqrt(rho), scales=coeffs,
                      meta={"kind": "Sech2Input", "amplitude": amplitude, "inverse_width": inverse_width})
