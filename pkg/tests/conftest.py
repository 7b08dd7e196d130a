from fractions import Fraction

import pytest
from hypothesis import settings

from chamanara import exponential_sequence, make_special_point, polynomial_sequence

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def squares():
    return polynomial_sequence([0, 0, 1])


@pytest.fixture(scope="session")
def mersenne():
    return exponential_sequence(2, -1)


@pytest.fixture(scope="session")
def zeta_exp(mersenne):
    return make_special_point(mersenne, mersenne)


@pytest.fixture(scope="session")
def zeta_sq(squares):
    return make_special_point(squares, squares)


def F(a, b=1):
    return Fraction(a, b)
