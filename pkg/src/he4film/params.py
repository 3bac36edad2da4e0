"""Physical inputs and every coefficient set of the film model.

Three routes lead to the coefficients ``G, beta, sigma`` of the nonlinear
Schrodinger equation

    i hbar psi_t = -hbar^2/(2m) psi_xx + [G(|psi|^2 - zeta0) + beta (|psi|^2)_xx
                   + sigma (|psi|^2)_xxxx] psi

* :func:`coefficients_from_roton` -- fixed by the sound speed ``c_s``, the roton
  gap ``Delta`` and the roton wavenumber ``k0``;
* :func:`coefficients_from_hydro` -- fixed by matching the two-fluid dispersion
  law with surface tension and a roton acceleration ``f_r``;
* :func:`classical_coefficients` -- the gravity-wave (Boussinesq) limit.

:func:`dimensionless_coefficients` gives ``a0..a3`` of the rescaled equation
with time unit ``hbar/(m c_s^2)`` and length unit ``1/k0``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .errors import ConfigError

ANGSTROM = 1e-10

#: Film thickness used when none is given. Nothing in the dimensionless
#: dynamics depends on it; physical coefficients scale with it.
DEFAULT_ZETA0 = 30 * ANGSTROM


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values (SI). ``m_he4`` is the helium-4 atomic mass."""

    hbar: float = 1.054571817e-34
    k_B: float = 1.380649e-23
    m_he4: float = 6.6464731e-27

    def __post_init__(self):
        for name in ("hbar", "k_B", "m_he4"):
            if not getattr(self, name) > 0:
                raise ConfigError("must be strictly positive", field=name)


CODATA2018 = PhysicalConstants()


class RotonMassWarning(UserWarning):
    """c_s^2 hbar^2 k0^2 <= 3 Delta^2: the roton minimum is not locally convex."""


@dataclass(frozen=True)
class FilmParameters:
    """Measurable inputs of one film.

    ``delta`` is interpreted according to ``delta_unit`` ("J" or "K", the
    latter meaning Delta/k_B) and always stored in joules afterwards. ``k0`` is
    in 1/m, lengths in m.
    """

    c_s: float
    delta: float
    k0: float
    zeta0: float = DEFAULT_ZETA0
    zeta_n: float = 0.0
    delta_unit: str = "J"
    constants: PhysicalConstants = CODATA2018

    def __post_init__(self):
        if self.delta_unit not in ("J", "K"):
            raise ConfigError(f"unknown unit {self.delta_unit!r}, expected 'J' or 'K'", field="delta_unit")
        if self.delta_unit == "K":
            object.__setattr__(self, "delta", self.delta * self.constants.k_B)
            object.__setattr__(self, "delta_unit", "J")
        for name in ("c_s", "delta", "k0", "zeta0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"must be finite and > 0, got {value!r}", field=name)
        if not self.zeta_n >= 0:
            raise ConfigError("must be >= 0", field="zeta_n")
        if not self.roton_mass_positive:
            warnings.warn(
                "c_s^2 hbar^2 k0^2 <= 3 Delta^2: roton effective mass is not positive; "
                "E(k) stays evaluable but the roton expansion does not apply",
                RotonMassWarning,
                stacklevel=3,
            )

    @property
    def m(self) -> float:
        return self.constants.m_he4

    @property
    def hbar(self) -> float:
        return self.constants.hbar

    @property
    def delta_kelvin(self) -> float:
        return self.delta / self.constants.k_B

    @property
    def roton_mass_positive(self) -> bool:
        h = self.constants.hbar
        return (self.c_s * h * self.k0) ** 2 > 3 * self.delta**2

    @property
    def gap_ratio(self) -> float:
        """Delta^2 / (c_s hbar k0)^2, the one number the roton shape depends on."""
        return self.delta**2 / (self.c_s * self.constants.hbar * self.k0) ** 2

    def with_zeta0(self, zeta0: float) -> "FilmParameters":
        return replace(self, zeta0=zeta0)


@dataclass(frozen=True)
class HydroParameters:
    """Two-fluid inputs: surface tension (N/m), density (kg/m^3), superfluid
    fraction q = rho_s/rho, roton acceleration f_r (m/s^2)."""

    gamma: float
    rho: float
    q: float = 1.0
    f_r: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ConfigError("must be >= 0", field="gamma")
        if not self.rho > 0:
            raise ConfigError("must be > 0", field="rho")
        if not 0 < self.q <= 1:
            raise ConfigError("must satisfy 0 < q <= 1", field="q")
        if not math.isfinite(self.f_r):
            raise ConfigError("must be finite", field="f_r")


@dataclass(frozen=True)
class PhysicalCoefficients:
    """G (J/m), beta (J m), sigma (J m^3): G*zeta, beta*zeta'' and
    sigma*zeta'''' are energies."""

    G: float
    beta: float
    sigma: float


@dataclass(frozen=True)
class ClassicalCoefficients:
    """Per-unit-mass coefficients of the classical limit (SI)."""

    G0: float
    beta0: float
    sigma0: float
    g: float


@dataclass(frozen=True)
class DimensionlessCoefficients:
    """a0..a3 of the rescaled equation plus the time and length units used."""

    a0: float
    a1: float
    a2: float
    a3: float
    delta_scale: float = 1.0
    l_scale: float = 1.0

    def __post_init__(self):
        if not (self.delta_scale > 0 and self.l_scale > 0):
            raise ConfigError("time and length scales must be > 0")

    def as_tuple(self):
        return (self.a0, self.a1, self.a2, self.a3)

    def perturbed(self, **relative) -> "DimensionlessCoefficients":
        """Copy with selected coefficients scaled by (1 + fraction)."""
        return replace(self, **{k: getattr(self, k) * (1 + v) for k, v in relative.items()})


def coefficients_from_roton(p: FilmParameters) -> PhysicalCoefficients:
    """G, beta, sigma fixed by (c_s, Delta, k0)."""
    m, h = p.m, p.hbar
    c2, d2, k0, z0 = p.c_s**2, p.delta**2, p.k0, p.zeta0
    G = m * c2 / z0
    beta = h**2 / (4 * m * z0) + 2 * m * c2 / (z0 * k0**2) - 3 * m * d2 / (z0 * h**2 * k0**4)
    sigma = m * c2 / (z0 * k0**4) - 2 * m * d2 / (z0 * h**2 * k0**6)
    return PhysicalCoefficients(G, beta, sigma)


def coefficients_from_hydro(p: FilmParameters, h: HydroParameters) -> PhysicalCoefficients:
    """G, beta, sigma from the small-k expansion of the two-fluid dispersion law."""
    m, hb = p.m, p.hbar
    c2, z0 = p.c_s**2, p.zeta0
    G = m * c2 / z0
    beta = hb**2 / (4 * m * z0) - m * h.q * h.gamma / h.rho + m * z0 * c2 / 3
    sigma = m * h.q * h.f_r * z0**4 + 2 * m * c2 * z0**3 / 15 - m * h.q * h.gamma * z0**2 / (3 * h.rho)
    return PhysicalCoefficients(G, beta, sigma)


def sigma_sign_threshold(p: FilmParameters, h: HydroParameters) -> float:
    """Roton acceleration above which the hydrodynamic sigma is positive."""
    return h.gamma / (3 * h.rho * p.zeta0**2) - 2 * p.c_s**2 / (15 * h.q * p.zeta0)


def classical_coefficients(g: float, h: HydroParameters, zeta0: float) -> ClassicalCoefficients:
    """Gravity-wave limit: G0 = g and the tanh-expansion beta0, sigma0."""
    if not g > 0:
        raise ConfigError("gravity must be > 0", field="g")
    beta0 = g * zeta0**2 / 3 - h.gamma / h.rho
    sigma0 = 2 * g * zeta0**4 / 15 - h.gamma * zeta0**2 / (3 * h.rho)
    return ClassicalCoefficients(G0=g, beta0=beta0, sigma0=sigma0, g=g)


def time_scale(p: FilmParameters) -> float:
    return p.hbar / (p.m * p.c_s**2)


def length_scale(p: FilmParameters) -> float:
    return 1.0 / p.k0


def dimensionless_coefficients(p: FilmParameters) -> DimensionlessCoefficients:
    """a0..a3 with time unit hbar/(m c_s^2) and length unit 1/k0."""
    m, h = p.m, p.hbar
    ratio = p.gap_ratio
    a0 = (h * p.k0) ** 2 / (2 * (m * p.c_s) ** 2)
    return DimensionlessCoefficients(
        a0=a0,
        a1=1.0,
        a2=2 + a0 / 2 - 3 * ratio,
        a3=1 - 2 * ratio,
        delta_scale=time_scale(p),
        l_scale=length_scale(p),
    )


def nondimensionalize(
    c: PhysicalCoefficients,
    p: FilmParameters,
    delta_scale: float | None = None,
    l_scale: float | None = None,
) -> DimensionlessCoefficients:
    """Rescale physical coefficients with arbitrary time/length units.

    Defaults reproduce :func:`dimensionless_coefficients`.
    """
    m, h, z0 = p.m, p.hbar, p.zeta0
    d = time_scale(p) if delta_scale is None else delta_scale
    l = length_scale(p) if l_scale is None else l_scale
    return DimensionlessCoefficients(
        a0=h * d / (2 * m * l**2),
        a1=c.G * z0 * d / h,
        a2=c.beta * z0 * d / (h * l**2),
        a3=c.sigma * z0 * d / (h * l**4),
        delta_scale=d,
        l_scale=l,
    )


# Parameter sets measured for thin He-4 films at low temperature.
PRESETS = {
    1: {"c_s_m_per_s": 59.36, "delta_K": 5.22, "k0_per_angstrom": 2.0},
    2: {"c_s_m_per_s": 63.4, "delta_K": 2.4, "k0_per_angstrom": 0.8},
}


def preset(case: int, zeta0: float = DEFAULT_ZETA0) -> FilmParameters:
    try:
        cfg = dict(PRESETS[case])
    except KeyError:
        raise ConfigError(f"unknown case {case!r}; choose from {sorted(PRESETS)}", field="case") from None
    cfg["zeta0_angstrom"] = zeta0 / ANGSTROM
    return film_from_config(cfg)


@dataclass(frozen=True)
class ParameterSet:
    film: FilmParameters
    hydro: HydroParameters | None = None
    extra: dict = field(default_factory=dict)


def _number(cfg, key):
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=key)
    return float(value)


def film_from_config(cfg: dict) -> FilmParameters:
    if "c_s_m_per_s" not in cfg:
        raise ConfigError("missing required field", field="c_s_m_per_s")
    c_s = _number(cfg, "c_s_m_per_s")

    if "delta_K" in cfg and "delta_J" in cfg:
        raise ConfigError("give only one of delta_K, delta_J", field="delta_K")
    if "delta_K" in cfg:
        delta, unit = _number(cfg, "delta_K"), "K"
    elif "delta_J" in cfg:
        delta, unit = _number(cfg, "delta_J"), "J"
    else:
        raise ConfigError("missing required field (or delta_J)", field="delta_K")

    if "k0_per_angstrom" in cfg and "k0_per_m" in cfg:
        raise ConfigError("give only one of k0_per_angstrom, k0_per_m", field="k0_per_angstrom")
    if "k0_per_angstrom" in cfg:
        k0 = _number(cfg, "k0_per_angstrom") / ANGSTROM
    elif "k0_per_m" in cfg:
        k0 = _number(cfg, "k0_per_m")
    else:
        raise ConfigError("missing required field (or k0_per_m)", field="k0_per_angstrom")

    zeta0 = _number(cfg, "zeta0_angstrom") * ANGSTROM if "zeta0_angstrom" in cfg else DEFAULT_ZETA0
    zeta_n = _number(cfg, "zeta_n_angstrom") * ANGSTROM if "zeta_n_angstrom" in cfg else 0.0
    return FilmParameters(c_s=c_s, delta=delta, k0=k0, zeta0=zeta0, zeta_n=zeta_n, delta_unit=unit)


def parameters_from_config(cfg: dict) -> ParameterSet:
    """Parse the JSON parameter schema (already decoded into a dict)."""
    if not isinstance(cfg, dict):
        raise ConfigError("top level must be a JSON object")
    film = film_from_config(cfg)
    hydro = None
    if "hydro" in cfg:
        hc = cfg["hydro"]
        if not isinstance(hc, dict):
            raise ConfigError("must be an object", field="hydro")
        missing = [k for k in ("gamma", "rho") if k not in hc]
        if missing:
            raise ConfigError("missing required field", field=f"hydro.{missing[0]}")
        hydro = HydroParameters(
            gamma=_number(hc, "gamma"),
            rho=_number(hc, "rho"),
            q=_number(hc, "q") if "q" in hc else 1.0,
            f_r=_number(hc, "f_r") if "f_r" in hc else 0.0,
        )
    known = {"c_s_m_per_s", "delta_K", "delta_J", "k0_per_angstrom", "k0_per_m",
             "zeta0_angstrom", "zeta_n_angstrom", "hydro"}
    extra = {k: v for k, v in cfg.items() if k not in known}
    return ParameterSet(film=film, hydro=hydro, extra=extra)


def load_config(path) -> ParameterSet:
    try:
        cfg = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    return parameters_from_config(cfg)


def film_to_config(p: FilmParameters) -> dict:
    return {
        "c_s_m_per_s": p.c_s,
        "delta_K": p.delta_kelvin,
        "k0_per_angstrom": p.k0 * ANGSTROM,
        "zeta0_angstrom": p.zeta0 / ANGSTROM,
        "zeta_n_angstrom": p.zeta_n / ANGSTROM,
    }


def coefficient_report(ps: ParameterSet) -> dict:
    """Everything computable from a parameter set, as plain JSON-able data."""
    from . import dispersion

    p = ps.film
    roton = coefficients_from_roton(p)
    dim = dimensionless_coefficients(p)
    table = dispersion.dispersion_table_coefficients(p)
    model = dispersion.dispersion_model(p)
    report = {
        "parameters": film_to_config(p),
        "constants": asdict(p.constants),
        "physical": asdict(roton),
        "dimensionless": asdict(dim),
        "dispersion_table": asdict(table),
        "lambda": list(model.lambdas),
        "Lambda": list(model.Lambdas),
        "roton_mass_positive": p.roton_mass_positive,
    }
    try:
        report["m_r_kg"] = dispersion.roton_effective_mass(p)
    except Exception:  # noqa: BLE001 - reported as missing, not fatal
        report["m_r_kg"] = None
    if ps.hydro is not None:
        report["hydro"] = {
            "inputs": asdict(ps.hydro),
            "physical": asdict(coefficients_from_hydro(p, ps.hydro)),
            "sigma_positive_above_f_r": sigma_sign_threshold(p, ps.hydro),
        }
    return report
