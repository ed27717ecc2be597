import random
from fractions import Fraction

import pytest

from padic_strings import (
    PAdicBall,
    cantor_string_3,
    euler_string,
    fibonacci_string_2,
    spectrum_of,
)


@pytest.fixture
def rng():
    return random.Random(20110711)


@pytest.fixture
def cantor3():
    return cantor_string_3()


@pytest.fixture
def fibonacci2():
    return fibonacci_string_2()


@pytest.fixture
def cantor3_spectrum(cantor3):
    return spectrum_of(cantor3)


@pytest.fixture
def fibonacci2_spectrum(fibonacci2):
    return spectrum_of(fibonacci2)


@pytest.fixture
def euler2():
    return euler_string(2)


def random_ball(rng: random.Random, p: int | None = None) -> PAdicBall:
    """Random ball with occasional fractional center and radius above 1."""
    if p is None:
        p = rng.choice((2, 3, 5))
    radius_exp = rng.randint(-3, 8)
    e = rng.choice((0, 0, 0, 1, 2))  # denominator exponent; mostly integers
    center = Fraction(rng.randint(0, p ** (max(radius_exp, 0) + 3)), p**e)
    return PAdicBall(p, center, radius_exp)


def random_point_in(rng: random.Random, ball: PAdicBall) -> Fraction:
    """A uniform-ish rational point of the ball: center + p^n * integer."""
    return ball.center + Fraction(ball.p) ** ball.radius_exp * rng.randint(0, ball.p**4)
