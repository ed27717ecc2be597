"""Exact arithmetic on p-adic balls.

A ball a + p^n Z_p holds the p-adic numbers within distance p^(-n) of a.
Everything here stays exact: centers are rationals whose denominator is a
power of p, Haar measures are `fractions.Fraction`, and ball comparisons
never touch floating point.  Two balls with congruent centers (mod p^n) and
equal radius are the same set, so centers are stored canonically reduced
modulo p^n and ball equality is plain field equality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import PrecisionError

# Miller-Rabin with witnesses {2, 3, 5, 7} is deterministic below
# 3_215_031_751, which covers the supported range p < 2^31.
_MR_WITNESSES = (2, 3, 5, 7)
_PRIME_LIMIT = 2**31


def is_prime(p: int) -> bool:
    """Deterministic primality check for 2 <= p < 2^31."""
    if not isinstance(p, int) or p < 2:
        return False
    if p >= _PRIME_LIMIT:
        raise ValueError(f"prime {p} out of supported range (< 2^31)")
    for w in _MR_WITNESSES:
        if p == w:
            return True
        if p % w == 0:
            return False
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"p = {p!r} is not a prime in [2, 2^31)")
    return p


def padic_valuation(x: int | Fraction, p: int) -> float:
    """v_p(x); returns math.inf for x == 0."""
    if x == 0:
        return math.inf
    fr = Fraction(x)
    v = 0
    n = fr.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = fr.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _require_p_power_denominator(c: Fraction, p: int) -> None:
    d = c.denominator
    while d % p == 0:
        d //= p
    if d != 1:
        raise ValueError(
            f"center {c} is not a finite base-{p} digit expansion "
            f"(denominator must be a power of {p})"
        )


@dataclass(frozen=True)
class PAdicBall:
    """The ball center + p^radius_exp * Z_p, of radius p^(-radius_exp).

    radius_exp may be any integer (negative exponents give balls larger than
    Z_p).  The stored center is the canonical representative in
    [0, p^radius_exp), which makes equality and hashing structural.
    """

    p: int
    center: Fraction
    radius_exp: int

    def __post_init__(self):
        require_prime(self.p)
        c = Fraction(self.center)
        _require_p_power_denominator(c, self.p)
        modulus = Fraction(self.p) ** self.radius_exp
        c = c - modulus * math.floor(c / modulus)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius_exp", int(self.radius_exp))

    @classmethod
    def from_digits(cls, p: int, v: int, digits: list[int], radius_exp: int) -> "PAdicBall":
        """Ball with center sum(digits[i] * p^(v+i)) and radius p^(-radius_exp)."""
        require_prime(p)
        if any(not (0 <= a < p) for a in digits):
            raise ValueError(f"digits must lie in [0, {p - 1}]")
        c = sum(Fraction(a) * Fraction(p) ** (v + i) for i, a in enumerate(digits))
        return cls(p, c, radius_exp)

    @property
    def radius(self) -> Fraction:
        return Fraction(self.p) ** (-self.radius_exp)

    def center_digits(self) -> tuple[int, list[int]]:
        """Canonical center as (starting valuation v, digits a_v, a_{v+1}, ...)."""
        c = self.center
        if c == 0:
            return 0, []
        v = int(padic_valuation(c, self.p))
        # c has a p-power denominator, so c * p^-v is a p-coprime integer.
        n = (c / Fraction(self.p) ** v).numerator
        digits = []
        while n:
            n, a = divmod(n, self.p)
            digits.append(a)
        return v, digits

    def parent(self) -> "PAdicBall":
        """The ball of radius p times this one's containing it."""
        return PAdicBall(self.p, self.center, self.radius_exp - 1)

    def children(self) -> list["PAdicBall"]:
        """The p disjoint sub-balls of one scale finer, sorted by center."""
        step = Fraction(self.p) ** self.radius_exp
        return [
            PAdicBall(self.p, self.center + c * step, self.radius_exp + 1)
            for c in range(self.p)
        ]

    def contains_point(self, x: int | Fraction) -> bool:
        return padic_valuation(Fraction(x) - self.center, self.p) >= self.radius_exp

    def __repr__(self):
        return f"PAdicBall({format_ball(self)!r})"


def haar_measure(b: PAdicBall) -> Fraction:
    """Haar measure of the ball, normalized so that mu(Z_p) = 1: p^(-radius_exp)."""
    return Fraction(b.p) ** (-b.radius_exp)


def sphere_measure(b: PAdicBall) -> Fraction:
    """Measure of the sphere (metric boundary) of the ball: (1 - 1/p) p^(-radius_exp)."""
    return (1 - Fraction(1, b.p)) * Fraction(b.p) ** (-b.radius_exp)


class BallRelation(Enum):
    DISJOINT = "disjoint"
    EQUAL = "equal"
    B1_INSIDE_B2 = "b1_inside_b2"
    B2_INSIDE_B1 = "b2_inside_b1"


def ball_relation(b1: PAdicBall, b2: PAdicBall) -> BallRelation:
    """Classify the pair; ultrametricity rules out partial overlap."""
    if b1.p != b2.p:
        raise ValueError(f"prime mismatch: {b1.p} vs {b2.p}")
    if b1.radius_exp == b2.radius_exp:
        return BallRelation.EQUAL if b1.center == b2.center else BallRelation.DISJOINT
    if b1.radius_exp > b2.radius_exp:  # b1 is the smaller ball
        inside = padic_valuation(b1.center - b2.center, b1.p) >= b2.radius_exp
        return BallRelation.B1_INSIDE_B2 if inside else BallRelation.DISJOINT
    inside = padic_valuation(b2.center - b1.center, b1.p) >= b1.radius_exp
    return BallRelation.B2_INSIDE_B1 if inside else BallRelation.DISJOINT


def ball_is_subset(inner: PAdicBall, outer: PAdicBall) -> bool:
    rel = ball_relation(inner, outer)
    return rel in (BallRelation.EQUAL, BallRelation.B1_INSIDE_B2)


def canonical_decompose(balls: list[PAdicBall], ambient: PAdicBall) -> list[PAdicBall]:
    """Rewrite a finite union of balls as its maximal disjoint balls.

    Output balls are pairwise disjoint, have the same union as the input, and
    none can be replaced by its parent without adding points outside the
    union.  Sorted by decreasing radius, then by center.
    """
    for b in balls:
        if b.p != ambient.p:
            raise ValueError("prime mismatch with ambient ball")
        if not ball_is_subset(b, ambient):
            raise ValueError(f"ball {format_ball(b)} lies outside the ambient ball")

    # Keep only balls not strictly contained in another input ball.
    ordered = sorted(set(balls), key=lambda b: (b.radius_exp, b.center))
    kept: list[PAdicBall] = []
    for b in ordered:
        if not any(ball_is_subset(b, big) for big in kept):
            kept.append(b)

    # Merge complete sibling families into their parent, finest scale first.
    by_exp: dict[int, set[PAdicBall]] = {}
    for b in kept:
        by_exp.setdefault(b.radius_exp, set()).add(b)
    if by_exp:
        for n in range(max(by_exp), ambient.radius_exp, -1):
            level = by_exp.get(n, set())
            families: dict[PAdicBall, list[PAdicBall]] = {}
            for b in level:
                families.setdefault(b.parent(), []).append(b)
            for parent, kids in families.items():
                if len(kids) == parent.p:
                    level.difference_update(kids)
                    by_exp.setdefault(n - 1, set()).add(parent)

    out = [b for level in by_exp.values() for b in level]
    out.sort(key=lambda b: (b.radius_exp, b.center))
    return out


@dataclass(frozen=True)
class PAdicAffineMap:
    """Affine similarity contraction x -> (unit * p^scale_valuation) x + shift.

    The contraction ratio is p^(-scale_valuation) with scale_valuation >= 1.
    unit and shift are truncations of p-adic integers to working_precision
    digits; images are exact in digits as long as the requested radius stays
    within that precision.
    """

    p: int
    scale_valuation: int
    scale_unit: int
    shift: int
    working_precision: int = 64

    def __post_init__(self):
        require_prime(self.p)
        if self.scale_valuation < 1:
            raise ValueError("contraction requires scale valuation >= 1")
        if self.working_precision < 1:
            raise ValueError("working_precision must be positive")
        mod = self.p**self.working_precision
        unit = self.scale_unit % mod
        if unit % self.p == 0:
            raise ValueError("scale unit must be a p-adic unit (not divisible by p)")
        object.__setattr__(self, "scale_unit", unit)
        object.__setattr__(self, "shift", self.shift % mod)

    @property
    def ratio(self) -> Fraction:
        return Fraction(1, self.p**self.scale_valuation)

    def __call__(self, x: int | Fraction) -> Fraction:
        return Fraction(self.scale_unit * self.p**self.scale_valuation) * Fraction(x) + self.shift


def apply_affine(m: PAdicAffineMap, b: PAdicBall) -> PAdicBall:
    """Image of a ball under the map: center maps through, radius shrinks by the ratio."""
    if m.p != b.p:
        raise ValueError("prime mismatch between map and ball")
    out_exp = b.radius_exp + m.scale_valuation
    v_c = padic_valuation(b.center, b.p)
    slack = 0 if v_c >= 0 else int(v_c)
    if out_exp > m.working_precision + slack:
        raise PrecisionError(
            f"image radius exponent {out_exp} exceeds working precision "
            f"{m.working_precision} (center valuation {v_c})"
        )
    return PAdicBall(b.p, m(b.center), out_exp)


def cantor_digit_map(ternary_digits: list[int]) -> int:
    """Send sum(a_j 3^-j) to sum(a_j 3^j), digit for digit.

    Input digits must lie in {0, 2} (the ternary Cantor alphabet); the output
    is the 3-adic integer with the same digit string read with positive
    exponents.
    """
    for a in ternary_digits:
        if a not in (0, 2):
            raise ValueError(f"digit {a!r} outside the Cantor alphabet {{0, 2}}")
    return sum(a * 3**j for j, a in enumerate(ternary_digits))


_BALL_RE = re.compile(r"^\s*(\d+)(?:/(\d+))?\+(\d+)\^(-?\d+)\*Z\s*$")


def parse_ball(text: str) -> PAdicBall:
    """Parse the literal format "c+p^n*Z", e.g. "5+3^2*Z" for 5 + 9 Z_3."""
    m = _BALL_RE.match(text)
    if not m:
        raise ValueError(f"malformed ball literal: {text!r}")
    num, den, p, n = m.groups()
    center = Fraction(int(num), int(den)) if den else Fraction(int(num))
    return PAdicBall(require_prime(int(p)), center, int(n))


def format_ball(b: PAdicBall) -> str:
    """Canonical "c+p^n*Z" text; round-trips through parse_ball."""
    c = b.center
    c_txt = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return f"{c_txt}+{b.p}^{b.radius_exp}*Z"
