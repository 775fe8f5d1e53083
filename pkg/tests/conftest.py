import pytest
from fractions import Fraction

from brjunolab import CFNumber, construct_tau_number


@pytest.fixture(scope="session")
def golden():
    return CFNumber.golden()


@pytest.fixture(scope="session")
def silver():
    return CFNumber.silver()


@pytest.fixture(scope="session")
def tau4():
    return construct_tau_number(4, a1=2)


@pytest.fixture(scope="session")
def tau3():
    return construct_tau_number(3, a1=2)


@pytest.fixture(scope="session")
def two_fifths():
    return CFNumber.from_rational(Fraction(2, 5))
