import random
from fractions import Fraction

import pytest

from latharm.poly import Polynomial3, parse_poly

QUARTIC_EXPR = "5*(x^4+y^4+z^4)-3*(x^2+y^2+z^2)^2"
# zonal degree-6 solid harmonic (Legendre direction z)
SEXTIC_EXPR = (
    "231*z^6-315*z^4*(x^2+y^2+z^2)+105*z^2*(x^2+y^2+z^2)^2-5*(x^2+y^2+z^2)^3"
)


@pytest.fixture(scope="session")
def quartic() -> Polynomial3:
    return parse_poly(QUARTIC_EXPR)


@pytest.fixture(scope="session")
def sextic() -> Polynomial3:
    return parse_poly(SEXTIC_EXPR)


def random_homogeneous(rng: random.Random, degree: int, n_terms: int = 4) -> Polynomial3:
    """Random homogeneous polynomial with small rational coefficients."""
    terms = {}
    for _ in range(n_terms):
        i = rng.randint(0, degree)
        j = rng.randint(0, degree - i)
        k = degree - i - j
        coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if coeff:
            terms[(i, j, k)] = terms.get((i, j, k), Fraction(0)) + coeff
    p = Polynomial3({m: c for m, c in terms.items() if c})
    return p if p else Polynomial3({(degree, 0, 0): Fraction(1)})
