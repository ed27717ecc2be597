"""Geometric zeta functions: Dirichlet partial sums and exact rational closed forms.

For a self-similar string the zeta function is a ratio of integer polynomials
in z = r^s with r = p^-d, d = gcd of all scaling and gap exponents:

    zeta(s) = (sum_k z^(m_k')) / (1 - sum_j z^(n_j'))

The polynomials are stored exactly with big-integer coefficients; s-plane
values are obtained by substituting z = exp(-s d log p).  Partial sums carry
rigorous geometric tail bounds, and the integral representation

    zeta(s) = zeta(1) l_1^(s-1) + p (1-s) int_0^{l_1} V(eps) eps^(s-2) deps

is verified piecewise-exactly (V is a step function, so every piece is a
power of eps integrated in closed form).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PoleProximityError
from .strings import (
    EULER,
    SELF_SIMILAR,
    LengthSpectrum,
    SelfSimilarSystem,
    ensure_valid,
    spectrum_of,
)

# ---------------------------------------------------------------------------
# exact integer polynomials in z
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; coeffs[i] is the coefficient of z^i."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        acc = 0 * z
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * a for i, a in enumerate(self.coeffs) if i))

    def scaled(self, k: int) -> "IntPolynomial":
        return IntPolynomial(tuple(k * a for a in self.coeffs))

    def strip_zero_root(self) -> tuple[int, "IntPolynomial"]:
        """Factor z^k exactly: returns (k, polynomial with nonzero constant term)."""
        if self.is_zero():
            return 0, self
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k, IntPolynomial(self.coeffs[k:])

    def taylor_at(self, z0: complex) -> list[complex]:
        """Coefficients of P(z0 + w) in w, by repeated synthetic division."""
        cur = [complex(a) for a in self.coeffs]
        out: list[complex] = []
        while cur:
            b = cur[:]
            for i in range(len(b) - 2, -1, -1):
                b[i] = cur[i] + z0 * b[i + 1]
            out.append(b[0])
            cur = b[1:]
        return out


def _to_frac(poly: IntPolynomial) -> list[Fraction]:
    return [Fraction(a) for a in poly.coeffs]


def _frac_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _frac_divmod(num: list[Fraction], den: list[Fraction]):
    if not _frac_trim(den[:]):
        raise ZeroDivisionError("polynomial division by zero")
    num = num[:]
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(_frac_trim(num)) >= len(den):
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        q[shift] = factor
        for i, a in enumerate(den):
            num[shift + i] -= factor * a
        num.pop()
    return q, num


def _primitive_int(c: list[Fraction]) -> IntPolynomial:
    c = _frac_trim(c[:])
    if not c:
        return IntPolynomial(())
    lcm = 1
    for a in c:
        lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in c]
    g = 0
    for a in ints:
        g = math.gcd(g, abs(a))
    ints = [a // g for a in ints]
    if ints[-1] < 0:
        ints = [-a for a in ints]
    return IntPolynomial(tuple(ints))


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Exact gcd over the rationals, returned primitive with positive lead."""
    fa, fb = _to_frac(a), _to_frac(b)
    while _frac_trim(fb):
        _, fa = _frac_divmod(fa, fb)
        fa, fb = fb, fa
    return _primitive_int(fa)


def poly_divexact(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    q, rem = _frac_divmod(_to_frac(a), _to_frac(b))
    if _frac_trim(rem):
        raise ValueError("polynomial division is not exact")
    if any(x.denominator != 1 for x in q):
        raise ValueError("exact quotient has non-integer coefficients")
    return IntPolynomial(tuple(int(x) for x in q))


def _frac_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _frac_trim([x - y for x, y in zip(a, b)])


def _frac_deriv(c: list[Fraction]) -> list[Fraction]:
    return [Fraction(i) * a for i, a in enumerate(c) if i]


def squarefree_decomposition(f: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: f = const * prod A_i^i with each A_i squarefree."""
    if f.degree < 1:
        return []
    g = poly_gcd(f, f.derivative())
    if g.degree == 0:
        return [(_primitive_int(_to_frac(f)), 1)]
    out: list[tuple[IntPolynomial, int]] = []
    c = _to_frac(poly_divexact(f, g))
    d = _frac_sub(_to_frac(poly_divexact(f.derivative(), g)), _frac_deriv(c))
    i = 1
    while len(_frac_trim(c[:])) > 1:
        a_i = poly_gcd(_primitive_int(c[:]), _primitive_int(d[:]))
        if a_i.degree >= 1:
            out.append((a_i, i))
            q, rem = _frac_divmod(c, _to_frac(a_i))
            if _frac_trim(rem):
                raise ValueError("squarefree decomposition: inexact division")
            c = q
            qd, remd = _frac_divmod(d, _to_frac(a_i))
            if _frac_trim(remd):
                raise ValueError("squarefree decomposition: inexact division")
            d = _frac_sub(qd, _frac_deriv(c))
        else:
            d = _frac_sub(d, _frac_deriv(c))
        i += 1
    return out


# ---------------------------------------------------------------------------
# rational zeta functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalZeta:
    """zeta(s) = num(z)/den(z) with z = p^(-d s); stored in reduced form."""

    num: IntPolynomial
    den: IntPolynomial
    p: int
    d: int

    def __post_init__(self):
        if self.num.is_zero():
            raise ValueError("zero numerator")
        if self.den.degree < 0 or self.den.coeffs[0] != 1:
            raise ValueError("denominator must have constant term 1")
        if poly_gcd(self.num, self.den).degree != 0:
            raise ValueError("numerator and denominator share a factor; reduce first")
        if self.d < 1:
            raise ValueError("d must be a positive integer")

    def z_of(self, s: complex) -> complex:
        return cmath.exp(-complex(s) * self.d * math.log(self.p))

    def to_json_obj(self) -> dict:
        return {
            "num": list(self.num.coeffs),
            "den": list(self.den.coeffs),
            "p": self.p,
            "d": self.d,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RationalZeta":
        return cls(
            IntPolynomial(tuple(obj["num"])),
            IntPolynomial(tuple(obj["den"])),
            int(obj["p"]),
            int(obj["d"]),
        )


def _reduced(num: IntPolynomial, den: IntPolynomial, p: int, d: int) -> RationalZeta:
    g = poly_gcd(num, den)
    if g.degree >= 1:
        num = poly_divexact(num, g)
        den = poly_divexact(den, g)
    if den.coeffs[0] == -1:
        num = num.scaled(-1)
        den = den.scaled(-1)
    return RationalZeta(num, den, p, d)


@lru_cache(maxsize=None)
def closed_form_zeta(sys: SelfSimilarSystem) -> RationalZeta:
    """Exact closed form: numerator sum_k z^(m_k'), denominator 1 - sum_j z^(n_j')."""
    ensure_valid(sys)
    d = sys.d
    n_red = sys.reduced_scaling_exps
    m_red = sys.reduced_gap_exps
    num = [0] * (max(m_red) + 1)
    for m in m_red:
        num[m] += 1
    den = [0] * (max(n_red) + 1)
    den[0] = 1
    for n in n_red:
        den[n] -= 1
    return _reduced(IntPolynomial(tuple(num)), IntPolynomial(tuple(den)), sys.p, d)


def euler_closed_form(p: int) -> RationalZeta:
    """zeta(s) = 1/(1 - z), z = p^-s: the geometric series closed form."""
    return RationalZeta(IntPolynomial((1,)), IntPolynomial((1, -1)), p, 1)


def zeta_eval(rz: RationalZeta, s: complex) -> complex:
    """Evaluate the meromorphic continuation at s (double precision)."""
    z = rz.z_of(s)
    q = rz.den(z)
    dq = rz.den.derivative()(z)
    scale = sum(abs(c) for c in rz.den.coeffs) * max(1.0, abs(z)) ** max(rz.den.degree, 0)
    near_pole = abs(q) < 1e-13 * max(abs(dq), 1e-3 * scale)
    if near_pole:
        root = z - q / dq if dq != 0 else z
        raise PoleProximityError(
            f"s = {s} lies within pole tolerance (z = {z}, nearest root ~ {root})", root
        )
    return rz.num(z) / q


def zeta_partial_sum(
    ls: LengthSpectrum, s: complex, terms: int
) -> tuple[complex, float]:
    """Partial Dirichlet sum over the first `terms` spectrum entries.

    Returns (value, tail_bound).  The bound dominates the dropped tail for
    Euler and self-similar generators whenever Re(s) exceeds the abscissa of
    convergence; below it the value is still returned with an infinite bound.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    s = complex(s)
    lp = math.log(ls.p)
    entries = ls.first_entries(terms)
    value = 0j
    for n, m in entries:
        value += cmath.exp(math.log(m) - n * s * lp)
    last_exp = entries[-1][0] if entries else 0
    value = complex(value)
    sigma = s.real
    if ls.generator == EULER:
        if sigma <= 0:
            return value, math.inf
        ratio = ls.p ** (-sigma)
        tail = ratio ** (last_exp + 1) / (1 - ratio)
        return value, tail
    if ls.generator == SELF_SIMILAR:
        sys = ls.system
        D = sys.similarity_dimension()
        if sigma <= D:
            return value, math.inf
        # words of weight w number at most p^(wD) (Moran equation makes the
        # weighted recursion a convex combination), so entry multiplicities
        # are at most K p^((w - m_1) D).
        K = len(sys.gap_exps)
        m1 = sys.gap_exps[0]
        ratio = ls.p ** (-(sigma - D))
        tail = K * ls.p ** (-m1 * D) * ratio ** (last_exp + 1) / (1 - ratio)
        return value, tail
    return value, 0.0  # explicit lists are complete once exhausted


def abscissa_of_convergence(source) -> float:
    """Abscissa of the Dirichlet series: Moran root for self-similar, 0 for Euler."""
    if isinstance(source, SelfSimilarSystem):
        return source.similarity_dimension()
    if isinstance(source, LengthSpectrum):
        if source.generator == EULER:
            return 0.0
        if source.generator == SELF_SIMILAR:
            return source.system.similarity_dimension()
    raise ValueError("abscissa known only for Euler and self-similar generators")


def verify_integral_representation(
    ls: LengthSpectrum, s: complex, scale_cutoff: int = 600
) -> float:
    """Residual of zeta(s) against its tube-volume integral representation.

    Both sides are truncated at scale_cutoff: the Dirichlet side as a partial
    sum, the integral side as a sum of exact per-piece integrals of the step
    function V (each piece contributes V_n (b^(s-1) - a^(s-1)) times -p,
    folding the p(1-s) prefactor into the antiderivative so s = 1 is regular).
    """
    s = complex(s)
    sigma = abscissa_of_convergence(ls)
    if s.real <= sigma:
        raise ValueError(
            f"Re(s) = {s.real} is not above the abscissa of convergence {sigma}"
        )
    p = ls.p
    lp = math.log(p)
    entries = ls.entries_up_to(scale_cutoff)
    if not entries:
        raise ValueError("spectrum has no entries below the cutoff")
    n1 = entries[0][0]
    zeta_ref = 0j
    for n, m in entries:
        zeta_ref += cmath.exp(math.log(m) - n * s * lp)

    zeta_one = float(ls.zeta_one())
    l1_pow = cmath.exp(-(s - 1) * n1 * lp)
    lhs = zeta_one * l1_pow
    for n in range(n1, scale_cutoff + 1):
        v_n = float(ls.tail_length(n)) / p
        if v_n == 0.0:
            continue
        b_pow = cmath.exp(-(s - 1) * n * lp)
        a_pow = cmath.exp(-(s - 1) * (n + 1) * lp)
        lhs += -p * v_n * (b_pow - a_pow)
    return abs(lhs - zeta_ref)
