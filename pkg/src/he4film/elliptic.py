"""Jacobi elliptic functions and the complete elliptic integral of the first kind.

Both use the arithmetic-geometric mean. The argument convention is the
*modulus* ``k`` (not the parameter ``m = k**2``), so ``jacobi_cn(z, 0)`` is
``cos z`` and ``jacobi_cn(z, 1)`` is ``sech z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModulusOne

MAX_ITER = 32
TOL = 1e-15


@dataclass(frozen=True)
class EllipticModulus:
    k: float

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise ValueError(f"elliptic modulus must lie in [0, 1], got {self.k!r}")

    def __float__(self):
        return float(self.k)


def _modulus(k) -> float:
    return float(EllipticModulus(float(k)))


def sech(z):
    z = np.asarray(z, dtype=float)
    # 1/cosh overflows gracefully to 0 for |z| > ~710
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(z)


def _agm_sequence(k):
    """Descending Landen sequence (a_n, c_n) starting from a=1, b=k', c=k."""
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    a, b, c = 1.0, kp, k
    a_seq, c_seq = [a], [c]
    for _ in range(MAX_ITER):
        if abs(c) <= TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def complete_elliptic_K(k) -> float:
    """K(k) = pi / (2 AGM(1, sqrt(1 - k^2))). Raises :class:`ModulusOne` at k = 1."""
    k = _modulus(k)
    if k == 1.0:
        raise ModulusOne("K(k) diverges at k = 1")
    a_seq, _ = _agm_sequence(k)
    return math.pi / (2.0 * a_seq[-1])


def jacobi_sncndn(z, k):
    """Return (sn, cn, dn) at real argument(s) ``z`` and modulus ``k``.

    For 0 < k < 1 the argument is first reduced modulo the real period 4K, then
    the amplitude is rebuilt by the descending Landen recursion.
    """
    k = _modulus(k)
    z = np.asarray(z, dtype=float)
    if k == 0.0:
        return np.sin(z), np.cos(z), np.ones_like(z)
    if k == 1.0:
        return np.tanh(z), sech(z), sech(z)

    a_seq, c_seq = _agm_sequence(k)
    K = math.pi / (2.0 * a_seq[-1])
    z = z - 4.0 * K * np.round(z / (4.0 * K))

    n = len(a_seq) - 1
    phi = (2.0**n) * a_seq[-1] * z
    for i in range(n, 0, -1):
        ratio = np.clip(c_seq[i] / a_seq[i] * np.sin(phi), -1.0, 1.0)
        phi = 0.5 * (phi + np.arcsin(ratio))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    return sn, cn, dn


def jacobi_cn(z, k):
    return jacobi_sncndn(z, k)[1]


def jacobi_sn(z, k):
    return jacobi_sncndn(z, k)[0]


def jacobi_dn(z, k):
    return jacobi_sncndn(z, k)[2]
