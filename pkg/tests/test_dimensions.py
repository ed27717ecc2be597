import cmath
import math
from fractions import Fraction

import pytest

from padic_strings import (
    IntPolynomial,
    InternalConsistencyError,
    RationalZeta,
    SelfSimilarSystem,
    complex_dimensions,
    denominator_roots,
    dimension_set_from_zeta,
    closed_form_zeta,
    euler_closed_form,
    moran_dimension,
    principal_part_at,
    residue_at,
    residue_by_contour,
    zeros_of_zeta,
)

PHI = (1 + math.sqrt(5)) / 2


def test_moran_dimension_named(cantor3, fibonacci2):
    assert abs(moran_dimension(cantor3) - math.log(2) / math.log(3)) < 1e-14
    assert abs(moran_dimension(fibonacci2) - math.log(PHI, 2)) < 1e-13


def test_moran_equal_ratio_closed_form():
    # N maps of common ratio p^-n: D = log N / log p^n
    sys = SelfSimilarSystem(2, (2, 2, 2), (2,))
    assert abs(moran_dimension(sys) - math.log(3) / math.log(4)) < 1e-14


def test_denominator_roots_simple():
    roots = denominator_roots(closed_form_zeta(SelfSimilarSystem(3, (1, 1), (1,))))
    assert len(roots) == 1
    z, mult = roots[0]
    assert mult == 1 and abs(z - 0.5) < 1e-15


def test_denominator_roots_fibonacci(fibonacci2):
    roots = denominator_roots(closed_form_zeta(fibonacci2))
    assert len(roots) == 2
    values = sorted((z for z, _ in roots), key=lambda z: z.real)
    assert abs(values[0] - (-PHI)) < 1e-12
    assert abs(values[1] - (PHI - 1)) < 1e-12
    assert all(m == 1 for _, m in roots)


def test_denominator_roots_multiplicity():
    rz = RationalZeta(IntPolynomial((0, 1)), IntPolynomial((1, -2, 1)), 2, 1)
    roots = denominator_roots(rz)
    assert len(roots) == 1
    z, mult = roots[0]
    assert mult == 2 and abs(z - 1.0) < 1e-12


def test_complex_dimensions_cantor(cantor3):
    ds = complex_dimensions(cantor3)
    assert len(ds.lines) == 1
    line = ds.lines[0]
    assert abs(line.omega - math.log(2) / math.log(3)) < 1e-13
    assert line.multiplicity == 1
    assert abs(ds.oscillatory_period - 2 * math.pi / math.log(3)) < 1e-13
    assert ds.D == line.omega.real


def test_complex_dimensions_fibonacci(fibonacci2):
    ds = complex_dimensions(fibonacci2)
    assert len(ds.lines) == 2
    D = math.log(PHI, 2)
    period = 2 * math.pi / math.log(2)
    assert abs(ds.lines[0].omega - D) < 1e-12
    assert abs(ds.lines[1].omega - complex(-D, period / 2)) < 1e-12
    assert ds.lines[0].multiplicity == ds.lines[1].multiplicity == 1


def test_complex_dimensions_euler_line():
    ds = dimension_set_from_zeta(euler_closed_form(5))
    assert len(ds.lines) == 1
    assert ds.lines[0].omega == 0
    assert abs(ds.oscillatory_period - 2 * math.pi / math.log(5)) < 1e-14
    assert abs(ds.lines[0].residue - 1 / math.log(5)) < 1e-14


def test_residues_named(cantor3, fibonacci2):
    rz_cs = closed_form_zeta(cantor3)
    ds_cs = complex_dimensions(cantor3)
    assert abs(residue_at(rz_cs, ds_cs.lines[0]) - 1 / (2 * math.log(3))) < 1e-13

    rz_fs = closed_form_zeta(fibonacci2)
    ds_fs = complex_dimensions(fibonacci2)
    assert abs(residue_at(rz_fs, ds_fs.lines[0]) - 1 / ((PHI + 2) * math.log(2))) < 1e-13
    assert abs(residue_at(rz_fs, ds_fs.lines[1]) - PHI / (math.sqrt(5) * math.log(2))) < 1e-12


def test_residue_rejects_multiple_pole():
    rz = RationalZeta(IntPolynomial((0, 1)), IntPolynomial((1, -2, 1)), 2, 1)
    ds = dimension_set_from_zeta(rz)
    with pytest.raises(ValueError):
        residue_at(rz, ds.lines[0])


def test_residue_periodicity_along_lines(cantor3, fibonacci2):
    # contour residues at omega + i n period agree with the representative's
    for sys in (cantor3, fibonacci2):
        rz = closed_form_zeta(sys)
        ds = complex_dimensions(sys)
        for line in ds.lines:
            expected = residue_at(rz, line)
            for n in range(-3, 4):
                s0 = line.omega + 1j * n * ds.oscillatory_period
                got = residue_by_contour(rz, s0, radius=2e-3)
                assert abs(got - expected) < 1e-8


def _scaling_multisets(p, max_exp):
    """All multisets of exponents in [1, max_exp] with sum of p^-n < 1, N >= 2."""
    out = []

    def rec(prefix, next_exp, remaining):
        for n in range(next_exp, max_exp + 1):
            weight = Fraction(1, p**n)
            if weight < remaining:
                cand = prefix + [n]
                if len(cand) >= 2:
                    out.append(tuple(cand))
                rec(cand, n, remaining - weight)

    rec([], 1, Fraction(1))
    return out


@pytest.mark.parametrize("p,max_exp", [(2, 6), (3, 4), (5, 2)])
def test_dominance_and_root_count_exhaustive(p, max_exp):
    # every exponent multiset (any gap completion shares its denominator):
    # exactly one positive real root, simple, of minimal modulus.  Other
    # roots may tie in modulus (when the scaling exponents share a finer gcd
    # than the full system) but never undercut it: D = max Re(omega).
    from padic_strings.dimensions import _roots_of_int_poly

    for exps in _scaling_multisets(p, max_exp):
        den = [0] * (max(exps) + 1)
        den[0] = 1
        for n in exps:
            den[n] -= 1
        poly = IntPolynomial(tuple(den))
        roots = _roots_of_int_poly(poly, 1e-9)
        assert sum(m for _, m in roots) == poly.degree
        real_pos = [(z, m) for z, m in roots if z.imag == 0 and 0 < z.real < 1]
        assert len(real_pos) == 1
        z_d, mult_d = real_pos[0]
        assert mult_d == 1
        for z, _ in roots:
            if z != z_d:
                assert abs(z) > z_d.real * (1 - 1e-9)


def test_dominance_tie_has_offset_imaginary_part():
    # ratios (1/4, 1/4) with gap 1/2: roots +-1/sqrt(2) share a modulus, so
    # the second line sits at Re = D but off the real axis
    sys = SelfSimilarSystem(2, (2, 2), (1,))
    ds = complex_dimensions(sys)
    assert len(ds.lines) == 2
    assert abs(ds.lines[1].omega.real - ds.D) < 1e-12
    assert abs(ds.lines[1].omega.imag - ds.oscillatory_period / 2) < 1e-12


def test_principal_part_simple_pole_matches_residue(cantor3):
    rz = closed_form_zeta(cantor3)
    ds = complex_dimensions(cantor3)
    (c1,) = principal_part_at(rz, ds.lines[0], 1)
    assert abs(c1 - residue_at(rz, ds.lines[0])) < 1e-13
    with pytest.raises(ValueError):
        principal_part_at(rz, ds.lines[0], 2)


def test_principal_part_double_pole():
    rz = RationalZeta(IntPolynomial((0, 1)), IntPolynomial((1, -2, 1)), 2, 1)
    ds = dimension_set_from_zeta(rz)
    line = ds.lines[0]
    c_m2, c_m1 = principal_part_at(rz, line, 2)
    assert abs(c_m2 - 1 / math.log(2) ** 2) < 1e-12
    assert abs(c_m1) < 1e-12
    # independent cross-checks by contour integration
    assert abs(residue_by_contour(rz, line.omega, radius=1e-2, moment=1) - c_m2) < 1e-9
    assert abs(residue_by_contour(rz, line.omega, radius=1e-2, moment=0) - c_m1) < 1e-6


def test_zeros_of_zeta(cantor3, fibonacci2):
    assert zeros_of_zeta(closed_form_zeta(fibonacci2)) == []
    assert zeros_of_zeta(closed_form_zeta(cantor3)) == []
    # gaps (2, 3) at p=2 with ratios (1/2, 1/8): numerator z^2 (1 + z)
    sys = SelfSimilarSystem(2, (1, 3), (2, 3))
    lines = zeros_of_zeta(closed_form_zeta(sys))
    assert len(lines) == 1
    period = 2 * math.pi / math.log(2)
    assert abs(lines[0].z_root - (-1.0)) < 1e-12
    assert abs(lines[0].omega - complex(0.0, period / 2)) < 1e-12


def test_dimension_set_serialization(cantor3):
    obj = complex_dimensions(cantor3).to_json_obj()
    assert set(obj) == {"D", "period", "lines"}
    assert obj["lines"][0]["multiplicity"] == 1
    assert abs(obj["lines"][0]["residue_re"] - 1 / (2 * math.log(3))) < 1e-13


def test_invalid_system_rejected_by_moran():
    with pytest.raises(ValueError):
        moran_dimension(SelfSimilarSystem(2, (1, 1), (1,)))
