import cmath
import math
import random
from fractions import Fraction

import pytest

from padic_strings import (
    IntPolynomial,
    PoleProximityError,
    RationalZeta,
    SelfSimilarSystem,
    abscissa_of_convergence,
    closed_form_zeta,
    euler_closed_form,
    euler_string,
    moran_dimension,
    spectrum_of,
    verify_integral_representation,
    zeta_eval,
    zeta_partial_sum,
)
from padic_strings.zeta import poly_divexact, poly_gcd, squarefree_decomposition


def test_int_polynomial_basics():
    p = IntPolynomial((1, 0, -2, 0))
    assert p.coeffs == (1, 0, -2)  # trailing zeros trimmed
    assert p.degree == 2
    assert p(2) == 1 - 8
    assert p.derivative().coeffs == (0, -4)
    k, stripped = IntPolynomial((0, 0, 3, 3)).strip_zero_root()
    assert k == 2 and stripped.coeffs == (3, 3)


def test_poly_gcd_and_divexact():
    a = IntPolynomial((1, -1, -2))  # (1+z)(1-2z)
    b = IntPolynomial((1, 1))  # 1+z
    g = poly_gcd(a, b)
    assert g.coeffs == (1, 1)
    assert poly_divexact(a, b).coeffs == (1, -2)
    assert poly_gcd(IntPolynomial((1, -2)), IntPolynomial((0, 0, 1))).degree == 0


def test_squarefree_decomposition():
    sq = IntPolynomial((1, -2, 1))  # (1-z)^2
    out = squarefree_decomposition(sq)
    assert len(out) == 1 and out[0][1] == 2
    assert tuple(abs(c) for c in out[0][0].coeffs) == (1, 1)

    mixed = IntPolynomial((0, 1, 1))  # z (1+z)
    out = squarefree_decomposition(mixed)
    assert out == [(IntPolynomial((0, 1, 1)), 1)]

    # (1+z)^2 (1-2z): multiplicity structure recovered exactly
    cube = IntPolynomial((1, 0, -3, -2))
    got = {mult: f.coeffs for f, mult in squarefree_decomposition(cube)}
    assert got[2] == (1, 1)
    assert got[1] in ((1, -2), (-1, 2))


def test_closed_forms(cantor3, fibonacci2):
    rz = closed_form_zeta(cantor3)
    assert rz.num.coeffs == (0, 1) and rz.den.coeffs == (1, -2)
    assert rz.p == 3 and rz.d == 1

    rz = closed_form_zeta(fibonacci2)
    assert rz.num.coeffs == (0, 0, 1) and rz.den.coeffs == (1, -1, -1)
    assert rz.p == 2 and rz.d == 1


def test_closed_form_gcd_reduction():
    # (2,2) + (2,2) at p=2: d = 2, repeated exponents aggregate
    sys = SelfSimilarSystem(2, (2, 2), (2, 2))
    rz = closed_form_zeta(sys)
    assert rz.d == 2
    assert rz.num.coeffs == (0, 2) and rz.den.coeffs == (1, -2)

    # shared factor between numerator and denominator is removed exactly:
    # p=3, ratios (1/3, 1/9, 1/9), gaps (1/3, 1/9) has zeta z(1+z)/((1+z)(1-2z))
    degenerate = SelfSimilarSystem(3, (1, 2, 2), (1, 2))
    rz = closed_form_zeta(degenerate)
    assert rz.num.coeffs == (0, 1) and rz.den.coeffs == (1, -2)


def test_closed_form_structure_invariants():
    random_sys = [
        SelfSimilarSystem(2, (1, 3, 3), (3, 3)),
        SelfSimilarSystem(3, (1, 1), (1,)),
        SelfSimilarSystem(2, (2, 2, 2), (2,)),
        SelfSimilarSystem(5, (1, 1, 1, 1), (1,)),
    ]
    for sys in random_sys:
        rz = closed_form_zeta(sys)
        assert rz.den.coeffs[0] == 1
        assert rz.num.coeffs[0] == 0  # lowest numerator exponent >= 1


def test_zeta_eval_examples(cantor3, fibonacci2):
    assert abs(zeta_eval(closed_form_zeta(cantor3), 1.0) - 1.0) < 1e-14
    assert abs(zeta_eval(euler_closed_form(3), 2.0) - 9 / 8) < 1e-14
    assert abs(zeta_eval(closed_form_zeta(fibonacci2), 0.0) - (-1.0)) < 1e-14


def test_zeta_eval_pole_proximity(cantor3):
    D = moran_dimension(cantor3)
    with pytest.raises(PoleProximityError) as info:
        zeta_eval(closed_form_zeta(cantor3), D + 1e-15)
    assert abs(info.value.z_root - 0.5) < 1e-6


def test_partial_sums_match_closed_form(cantor3, fibonacci2):
    rng = random.Random(42)
    cases = [
        (spectrum_of(cantor3), closed_form_zeta(cantor3)),
        (spectrum_of(fibonacci2), closed_form_zeta(fibonacci2)),
        (euler_string(2), euler_closed_form(2)),
    ]
    for ls, rz in cases:
        D = abscissa_of_convergence(ls)
        for _ in range(20):
            s = complex(D + 0.2 + 2.0 * rng.random(), 4.0 * (rng.random() - 0.5))
            value, tail = zeta_partial_sum(ls, s, 2000)
            assert abs(value - zeta_eval(rz, s)) < tail + 1e-10


def test_partial_sum_at_one_approaches_total_length(cantor3):
    ls = spectrum_of(cantor3)
    value, tail = zeta_partial_sum(ls, 1.0, 100)
    assert abs(value - 1.0) < tail + 1e-12
    assert tail < 1e-15


def test_partial_sum_below_abscissa_is_flagged(cantor3):
    value, tail = zeta_partial_sum(spectrum_of(cantor3), 0.3, 50)
    assert tail == math.inf
    assert abs(value) > 0


def test_partial_sum_dominant_term(euler2):
    value, _ = zeta_partial_sum(euler2, 80.0, 10)
    assert abs(value - 1.0) < 1e-20  # first length 1 dominates at huge Re(s)


def test_gcd_consistency_for_even_exponent_system():
    # all exponents share d = 2, so z = p^(-2s); the reduced polynomials must
    # describe the same function of s as the raw Dirichlet series
    sys2 = SelfSimilarSystem(2, (2, 2), (2, 2))
    rz = closed_form_zeta(sys2)
    assert rz.d == 2
    assert rz.num.coeffs == (0, 2) and rz.den.coeffs == (1, -2)
    rng = random.Random(7)
    ls = spectrum_of(sys2)
    D = moran_dimension(sys2)
    for _ in range(10):
        s = complex(D + 0.3 + rng.random(), 2 * rng.random())
        v, tail = zeta_partial_sum(ls, s, 300)
        assert abs(v - zeta_eval(rz, s)) < tail + 1e-12
    # the same reduced function evaluated through d=2 equals the hand formula
    s = 0.9 + 0.4j
    z = cmath.exp(-2 * s * math.log(2))
    assert abs(zeta_eval(rz, s) - 2 * z / (1 - 2 * z)) < 1e-14


def test_abscissa_values(cantor3, fibonacci2):
    assert abs(abscissa_of_convergence(cantor3) - math.log(2) / math.log(3)) < 1e-14
    assert abscissa_of_convergence(euler_string(5)) == 0.0
    phi = (1 + math.sqrt(5)) / 2
    assert abs(abscissa_of_convergence(fibonacci2) - math.log(phi, 2)) < 1e-13
    with pytest.raises(ValueError):
        abscissa_of_convergence("not a spectrum")


def test_euler_closed_form():
    rz = euler_closed_form(2)
    assert rz.num.coeffs == (1,) and rz.den.coeffs == (1, -1)
    value, tail = zeta_partial_sum(euler_string(2), 3.0, 40)
    assert abs(value - zeta_eval(rz, 3.0)) < 1e-12
    assert tail < 1e-11


def test_integral_representation_examples(cantor3, euler2):
    ls = spectrum_of(cantor3)
    assert verify_integral_representation(ls, 0.9, 400) < 1e-10
    assert verify_integral_representation(euler2, 1.5, 400) < 1e-10
    assert verify_integral_representation(ls, 1.0, 400) < 1e-10
    with pytest.raises(ValueError):
        verify_integral_representation(ls, 0.3, 400)


def test_integral_representation_grid(cantor3, fibonacci2):
    cases = [spectrum_of(cantor3), spectrum_of(fibonacci2), euler_string(2), euler_string(3)]
    for ls in cases:
        D = abscissa_of_convergence(ls)
        for re_part in (D + 0.1, D + 0.4, 1.0, 1.25, 1.5):
            for im_part in (-2.0, -0.5, 0.0, 1.0, 2.0):
                s = complex(re_part, im_part)
                assert verify_integral_representation(ls, s, 700) < 1e-9


def test_rational_zeta_serialization(cantor3):
    rz = closed_form_zeta(cantor3)
    obj = rz.to_json_obj()
    assert obj == {"num": [0, 1], "den": [1, -2], "p": 3, "d": 1}
    assert RationalZeta.from_json_obj(obj) == rz


def test_rational_zeta_rejects_unreduced():
    with pytest.raises(ValueError):
        RationalZeta(IntPolynomial((0, 1, 1)), IntPolynomial((1, -1, -2)), 3, 1)
