"""Exception types.

Everything raised on purpose by the library derives from :class:`He4FilmError`.
The CLI maps :class:`ConfigError` to exit code 2 and every other subclass to
exit code 1.
"""


class He4FilmError(Exception):
    """Base class for library errors."""


class ConfigError(He4FilmError, ValueError):
    """Invalid or incomplete parameter input."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class NegativeRadicand(He4FilmError, ValueError):
    """E(k)^2 < 0: the wavenumber lies outside the model's validity window."""

    def __init__(self, k, radicand):
        self.k = k
        self.radicand = radicand
        super().__init__(f"negative dispersion radicand {radicand:.6g} at k={k:.6g} 1/m")


class NonPositiveDenominator(He4FilmError, ValueError):
    """Roton effective mass undefined: 4 c_s^2 hbar^2 k0^2 <= 12 Delta^2."""


class ModulusOne(He4FilmError, ValueError):
    """Complete elliptic integral K(k) diverges at k = 1."""


class SigmaZero(He4FilmError, ZeroDivisionError):
    """Quartic coefficient sigma vanishes and the Q-quadratic degenerates."""


class InfeasibleQ(He4FilmError, ValueError):
    """A Q value violates a feasibility condition of the traveling-wave family."""

    def __init__(self, message, condition=None):
        self.condition = condition
        super().__init__(message)


class NoPositiveQ(He4FilmError, ValueError):
    """The cosine-wave quadratic in Q has no positive real root."""


class SubcriticalVelocity(He4FilmError, ValueError):
    """Cosine-wave velocity at or below the threshold v0."""


class ModulusSingular(He4FilmError, ValueError):
    """Elliptic modulus too close to 1/sqrt(2), where 2k^2 - 1 vanishes."""


class NonPositiveThickness(He4FilmError, ValueError):
    """zeta0 + eta <= 0 somewhere on the grid."""


class NoRealRoot(He4FilmError, ValueError):
    """Quadratic without real roots."""


class NegativeQ0Squared(He4FilmError, ValueError):
    """Selected branch of the dimensionless cosine quadratic gives q0^2 <= 0."""


class UnderResolved(He4FilmError, ValueError):
    """Grid too coarse for the requested residual evaluation."""


class NonFinite(He4FilmError, FloatingPointError):
    """NaN or overflow detected during time integration."""

    def __init__(self, message, step=None, last_good=None):
        self.step = step
        self.last_good = last_good
        super().__init__(message)
