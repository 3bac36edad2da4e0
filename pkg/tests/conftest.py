import warnings

import pytest

from he4film.params import (
    RotonMassWarning,
    coefficients_from_roton,
    dimensionless_coefficients,
    preset,
)


def film(case, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RotonMassWarning)
        return preset(case, **kw)


@pytest.fixture(scope="session")
def case1():
    return film(1)


@pytest.fixture(scope="session")
def case2():
    return film(2)


@pytest.fixture(scope="session")
def coeffs1(case1):
    return coefficients_from_roton(case1)


@pytest.fixture(scope="session")
def dim1(case1):
    return dimensionless_coefficients(case1)
