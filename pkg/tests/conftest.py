import random

import pytest
from mpmath import iv

from apcorona import APPolynomial, Semigroup, make_basis


@pytest.fixture(scope="session")
def unit_basis():
    return make_basis([("one", 1)])


@pytest.fixture(scope="session")
def sqrt2_basis():
    return make_basis([("one", 1), ("s", lambda: iv.sqrt(2))])


@pytest.fixture(scope="session")
def sg_n(unit_basis):
    """The semigroup of all nonnegative integers."""
    return Semigroup.from_values(unit_basis, [1])


@pytest.fixture(scope="session")
def sg_23(unit_basis):
    return Semigroup.from_values(unit_basis, [2, 3])


@pytest.fixture(scope="session")
def sg_pell(sqrt2_basis):
    """The paper-counterexample family {k + l*sqrt(2) : k, l >= 0}."""
    return Semigroup.from_values(sqrt2_basis, [1, {"s": 1}])


def random_polynomial(basis, rng: random.Random, max_terms=6, max_freq=8,
                      irrational=False, coeff_scale=2.0):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        if irrational:
            spec = {"one": rng.randint(0, max_freq // 2),
                    "s": rng.randint(0, max_freq // 2)}
        else:
            spec = rng.randint(0, max_freq)
        terms[basis.frequency(spec)] = complex(
            rng.uniform(-coeff_scale, coeff_scale),
            rng.uniform(-coeff_scale, coeff_scale))
    return APPolynomial(basis, terms)
