"""p-adic fractal strings as length spectra, and self-similar systems.

A string is reduced to its multiset of interval lengths p^(-n), stored as a
stream of (scale exponent, multiplicity) pairs sorted by increasing exponent.
Self-similar strings are described by scaling exponents n_j (ratios p^(-n_j))
and gap exponents m_k (gap lengths p^(-m_k)); every derived quantity (zeta
closed form, dimensions, tube volumes) depends only on those exponents.
Multiplicities come from a weighted-composition dynamic program over words in
the contraction maps; explicit ball enumeration is kept for cross-checks and
needs the optional affine maps and gap balls.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .padic import (
    PAdicAffineMap,
    PAdicBall,
    BallRelation,
    apply_affine,
    ball_relation,
    format_ball,
    haar_measure,
    parse_ball,
    require_prime,
)

EULER = "euler"
SELF_SIMILAR = "self-similar"
EXPLICIT = "explicit-list"


@dataclass(frozen=True)
class SystemReport:
    valid: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class SelfSimilarSystem:
    """Scaling exponents n_j and gap exponents m_k of a self-similar string.

    Valid systems satisfy sum(p^-n_j) + sum(p^-m_k) = 1 exactly with
    sum(p^-n_j) < 1; use validate_system to check without raising.  The
    optional affine maps / gap balls are needed only for interval
    enumeration.
    """

    p: int
    scaling_exps: tuple[int, ...]
    gap_exps: tuple[int, ...]
    maps: tuple[PAdicAffineMap, ...] | None = None
    gap_balls: tuple[PAdicBall, ...] | None = None

    def __post_init__(self):
        require_prime(self.p)
        scal = tuple(sorted(int(n) for n in self.scaling_exps))
        gaps = tuple(sorted(int(m) for m in self.gap_exps))
        if any(n < 1 for n in scal) or any(m < 1 for m in gaps):
            raise ValueError("scaling and gap exponents must be positive integers")
        if not scal:
            raise ValueError("at least one scaling exponent required")
        object.__setattr__(self, "scaling_exps", scal)
        object.__setattr__(self, "gap_exps", gaps)
        if self.maps is not None:
            object.__setattr__(self, "maps", tuple(self.maps))
        if self.gap_balls is not None:
            object.__setattr__(self, "gap_balls", tuple(self.gap_balls))

    @property
    def d(self) -> int:
        """gcd of all scaling and gap exponents; p^d = 1/r."""
        return math.gcd(*(self.scaling_exps + self.gap_exps))

    @property
    def reduced_scaling_exps(self) -> tuple[int, ...]:
        d = self.d
        return tuple(n // d for n in self.scaling_exps)

    @property
    def reduced_gap_exps(self) -> tuple[int, ...]:
        d = self.d
        return tuple(m // d for m in self.gap_exps)

    @property
    def r(self) -> Fraction:
        """Multiplicative generator of the length group, r = p^-d."""
        return Fraction(1, self.p**self.d)

    def ratios(self) -> list[Fraction]:
        return [Fraction(1, self.p**n) for n in self.scaling_exps]

    def gap_lengths(self) -> list[Fraction]:
        return [Fraction(1, self.p**m) for m in self.gap_exps]

    def similarity_dimension(self) -> float:
        """Unique real root of the Moran equation sum_j p^(-n_j s) = 1.

        Bisection on [0, 1]: the map is strictly decreasing with value
        N >= 2 at s=0 and sum r_j < 1 at s=1, so the bracket is guaranteed.
        """
        report = validate_system(self)
        if not report.valid:
            raise ValueError(f"invalid system: {'; '.join(report.violations)}")

        def f(s: float) -> float:
            return math.fsum(self.p ** (-n * s) for n in self.scaling_exps) - 1.0

        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if f(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def validity_eps_bound(self) -> Fraction:
        """Upper end g_K / r_N of the exact tube formula's range of validity."""
        return Fraction(self.p) ** (max(self.scaling_exps) - max(self.gap_exps))

    def to_json(self) -> str:
        obj: dict = {
            "p": self.p,
            "scaling_exps": list(self.scaling_exps),
            "gap_exps": list(self.gap_exps),
        }
        if self.maps is not None:
            obj["maps"] = [
                {
                    "scale_val": m.scale_valuation,
                    "scale_unit": _digits_of(m.scale_unit, self.p),
                    "shift": _digits_of(m.shift, self.p),
                }
                for m in self.maps
            ]
        if self.gap_balls is not None:
            obj["gaps"] = [format_ball(b) for b in self.gap_balls]
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "SelfSimilarSystem":
        obj = json.loads(text)
        p = require_prime(int(obj["p"]))
        maps = None
        if "maps" in obj and obj["maps"] is not None:
            maps = tuple(
                PAdicAffineMap(
                    p,
                    int(m["scale_val"]),
                    _int_of_digits(m["scale_unit"], p),
                    _int_of_digits(m["shift"], p),
                )
                for m in obj["maps"]
            )
        gaps = None
        if "gaps" in obj and obj["gaps"] is not None:
            gaps = tuple(parse_ball(s) for s in obj["gaps"])
        return cls(
            p,
            tuple(int(n) for n in obj["scaling_exps"]),
            tuple(int(m) for m in obj["gap_exps"]),
            maps=maps,
            gap_balls=gaps,
        )


def _digits_of(n: int, p: int) -> list[int]:
    if n == 0:
        return [0]
    digits = []
    while n:
        n, a = divmod(n, p)
        digits.append(a)
    return digits


def _int_of_digits(digits: list[int], p: int) -> int:
    if any(not (0 <= int(a) < p) for a in digits):
        raise ValueError(f"digit outside [0, {p - 1}] in {digits!r}")
    return sum(int(a) * p**i for i, a in enumerate(digits))


def validate_system(sys: SelfSimilarSystem) -> SystemReport:
    """Check the gap identity, the strict contraction bound, and depth-1 geometry.

    Never raises on mathematically invalid input; returns the violation list.
    """
    violations: list[str] = []
    p = sys.p
    if len(sys.scaling_exps) < 2:
        violations.append("need at least N >= 2 contraction ratios")
    if len(sys.gap_exps) < 1:
        violations.append("need at least K >= 1 gap")
    total_r = sum(Fraction(1, p**n) for n in sys.scaling_exps)
    total_g = sum(Fraction(1, p**m) for m in sys.gap_exps)
    if total_r >= 1:
        violations.append(f"sum of contraction ratios is {total_r}, must be < 1")
    if total_r + total_g != 1:
        violations.append(
            f"gap identity fails: sum r_j + sum g_k = {total_r + total_g} != 1"
        )
    if sys.maps is not None:
        if len(sys.maps) != len(sys.scaling_exps):
            violations.append("number of affine maps differs from number of ratios")
        else:
            vals = sorted(m.scale_valuation for m in sys.maps)
            if tuple(vals) != sys.scaling_exps:
                violations.append("map scale valuations do not match scaling exponents")
    if sys.gap_balls is not None:
        if len(sys.gap_balls) != len(sys.gap_exps):
            violations.append("number of gap balls differs from number of gaps")
        else:
            measures = sorted(haar_measure(b) for b in sys.gap_balls)
            expected = sorted(Fraction(1, p**m) for m in sys.gap_exps)
            if measures != expected:
                violations.append("gap ball measures do not match gap exponents")
    if sys.maps is not None and sys.gap_balls is not None and not violations:
        unit = PAdicBall(p, 0, 0)
        pieces = [apply_affine(m, unit) for m in sys.maps] + list(sys.gap_balls)
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if ball_relation(pieces[i], pieces[j]) is not BallRelation.DISJOINT:
                    violations.append(
                        f"depth-1 pieces overlap: {format_ball(pieces[i])} "
                        f"vs {format_ball(pieces[j])}"
                    )
    return SystemReport(valid=not violations, violations=tuple(violations))


def ensure_valid(sys: SelfSimilarSystem) -> SelfSimilarSystem:
    report = validate_system(sys)
    if not report.valid:
        raise ValueError("invalid self-similar system: " + "; ".join(report.violations))
    return sys


class LengthSpectrum:
    """Stream of (scale exponent n, multiplicity m): m intervals of length p^-n.

    Entries are sorted by strictly increasing exponent and extended lazily;
    prefix sums are cached so tube volumes and partial zeta sums stay cheap.
    The generator tag records provenance so closed forms can dispatch.
    Extension is locked, so prefixes may be evaluated from several threads.
    """

    __slots__ = ("p", "generator", "system", "_entries", "_ways", "_heads", "_upto", "_lock")

    def __init__(
        self,
        p: int,
        generator: str,
        system: SelfSimilarSystem | None = None,
        entries: list[tuple[int, int]] | None = None,
    ):
        require_prime(p)
        if generator not in (EULER, SELF_SIMILAR, EXPLICIT):
            raise ValueError(f"unknown generator tag {generator!r}")
        self.p = p
        self.generator = generator
        self.system = system
        if generator == SELF_SIMILAR:
            if system is None or system.p != p:
                raise ValueError("self-similar spectrum needs its system (same prime)")
            ensure_valid(system)
            self._ways = [1]  # words of total scaling weight w
        else:
            self._ways = None
        if generator == EXPLICIT:
            if not entries:
                raise ValueError("explicit spectrum needs a nonempty entry list")
            ordered = [(int(n), int(m)) for n, m in entries]
            if any(m < 1 for _, m in ordered) or any(n < 0 for n, _ in ordered):
                raise ValueError("entries must have exponent >= 0 and multiplicity >= 1")
            if any(b <= a for (a, _), (b, _) in zip(ordered, ordered[1:])):
                raise ValueError("entries must be sorted by strictly increasing exponent")
            self._entries = ordered
        else:
            self._entries = []
        # cumulative lengths sum_{exp <= K} m p^-exp, index K, starting at K=-1 -> 0
        self._heads = [Fraction(0)]
        self._upto = -1
        self._lock = threading.Lock()

    # -- generation ------------------------------------------------------

    def _extend(self, max_exp: int) -> None:
        if max_exp <= self._upto:
            return
        with self._lock:
            self._extend_locked(max_exp)

    def _extend_locked(self, max_exp: int) -> None:
        if max_exp <= self._upto:
            return
        if self.generator == SELF_SIMILAR:
            scal = self.system.scaling_exps
            gaps = self.system.gap_exps
            ways = self._ways
            for w in range(len(ways), max_exp + 1):
                ways.append(sum(ways[w - n] for n in scal if n <= w))
            for n in range(self._upto + 1, max_exp + 1):
                m = sum(ways[n - mk] for mk in gaps if mk <= n)
                if m:
                    self._entries.append((n, m))
                self._heads.append(
                    self._heads[-1] + Fraction(m, self.p**n) if m else self._heads[-1]
                )
        elif self.generator == EULER:
            for n in range(self._upto + 1, max_exp + 1):
                self._entries.append((n, 1))
                self._heads.append(self._heads[-1] + Fraction(1, self.p**n))
        else:  # explicit list is already complete; only the prefix sums grow
            known = dict(self._entries)
            for n in range(self._upto + 1, max_exp + 1):
                m = known.get(n, 0)
                self._heads.append(
                    self._heads[-1] + Fraction(m, self.p**n) if m else self._heads[-1]
                )
        self._upto = max_exp

    def entries_up_to(self, max_exp: int) -> list[tuple[int, int]]:
        """All (exponent, multiplicity) pairs with exponent <= max_exp."""
        self._extend(max_exp)
        return [(n, m) for n, m in self._entries if n <= max_exp]

    def first_entries(self, count: int) -> list[tuple[int, int]]:
        """The first `count` entries in scale order."""
        if self.generator == EXPLICIT:
            return self._entries[:count]
        step = 16
        if self.generator == SELF_SIMILAR:
            step = max(self.system.scaling_exps[-1] + self.system.gap_exps[-1], 16)
        while len(self._entries) < count:
            self._extend(max(self._upto, 0) + step)
        return self._entries[:count]

    # -- exact aggregates --------------------------------------------------

    def zeta_one(self) -> Fraction:
        """Total length sum m p^-n, exact: the zeta value at s = 1."""
        if self.generator == EULER:
            return Fraction(self.p, self.p - 1)
        if self.generator == SELF_SIMILAR:
            return Fraction(1)
        return sum((Fraction(m, self.p**n) for n, m in self._entries), Fraction(0))

    def head_length(self, max_exp: int) -> Fraction:
        """sum of m p^-n over entries with n <= max_exp, exact."""
        if max_exp < 0:
            return Fraction(0)
        self._extend(max_exp)
        return self._heads[max_exp + 1]

    def tail_length(self, max_exp: int) -> Fraction:
        """sum of m p^-n over entries with n > max_exp, exact (closed-form tail)."""
        if self.generator == EULER:
            low = max(max_exp + 1, 0)
            return Fraction(1, self.p**low) * Fraction(self.p, self.p - 1)
        return self.zeta_one() - self.head_length(max_exp)

    def total_prefix_bounds(self, max_exp: int) -> tuple[Fraction, Fraction]:
        """(lower, upper) bounds on the total length from the prefix up to max_exp."""
        head = self.head_length(max_exp)
        return head, head + self.tail_length(max_exp)

    def __repr__(self):
        return f"LengthSpectrum(p={self.p}, generator={self.generator!r})"


def euler_string(p: int) -> LengthSpectrum:
    """One interval of each length p^-n, n = 0, 1, 2, ...; total length p/(p-1)."""
    return LengthSpectrum(p, EULER)


def explicit_spectrum(p: int, entries: list[tuple[int, int]]) -> LengthSpectrum:
    return LengthSpectrum(p, EXPLICIT, entries=entries)


@lru_cache(maxsize=None)
def spectrum_of(sys: SelfSimilarSystem) -> LengthSpectrum:
    """Shared lazy spectrum of the system (entry cache reused across callers)."""
    return LengthSpectrum(sys.p, SELF_SIMILAR, system=sys)


def self_similar_spectrum(sys: SelfSimilarSystem, max_scale_exp: int) -> LengthSpectrum:
    """Length spectrum of the system with entries materialized up to max_scale_exp."""
    ls = spectrum_of(sys)
    ls.entries_up_to(max_scale_exp)
    return ls


def total_length(ls: LengthSpectrum) -> Fraction:
    return ls.zeta_one()


@lru_cache(maxsize=None)
def cantor_string_3() -> SelfSimilarSystem:
    """The 3-adic Cantor string: ratios (1/3, 1/3), one gap 1 + 3 Z_3."""
    maps = (
        PAdicAffineMap(3, 1, 1, 0),  # x -> 3x
        PAdicAffineMap(3, 1, 1, 2),  # x -> 3x + 2
    )
    gaps = (PAdicBall(3, 1, 1),)
    return SelfSimilarSystem(3, (1, 1), (1,), maps=maps, gap_balls=gaps)


@lru_cache(maxsize=None)
def fibonacci_string_2() -> SelfSimilarSystem:
    """The 2-adic Fibonacci string: ratios (1/2, 1/4), one gap 3 + 4 Z_2."""
    maps = (
        PAdicAffineMap(2, 1, 1, 0),  # x -> 2x
        PAdicAffineMap(2, 2, 1, 1),  # x -> 4x + 1
    )
    gaps = (PAdicBall(2, 3, 2),)
    return SelfSimilarSystem(2, (1, 2), (2,), maps=maps, gap_balls=gaps)


def enumerate_intervals(sys: SelfSimilarSystem, depth: int) -> list[PAdicBall]:
    """All balls Phi_w(G_k) over words of length < depth, pairwise disjoint.

    Requires the system to carry explicit maps and gap balls.  depth 0 gives
    the empty list.
    """
    if sys.maps is None or sys.gap_balls is None:
        raise ValueError("system carries no affine maps / gap balls")
    ensure_valid(sys)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    out: list[PAdicBall] = []
    level = list(sys.gap_balls)
    for _ in range(depth):
        out.extend(level)
        level = [apply_affine(m, b) for b in level for m in sys.maps]
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if ball_relation(out[i], out[j]) is not BallRelation.DISJOINT:
                raise ValueError(
                    f"overlap detected (invalid system): {format_ball(out[i])} "
                    f"vs {format_ball(out[j])}"
                )
    out.sort(key=lambda b: (b.radius_exp, b.center))
    return out


@dataclass(frozen=True)
class RealLengthSpectrum:
    """Archimedean counterpart: decreasing lengths with multiplicities, no prime.

    generator "cantor" means the classical Cantor string lengths 3^-n with
    multiplicities 2^(n-1); its geometric tails are summed in closed form.
    """

    entries: tuple[tuple[Fraction, int], ...] = ()
    generator: str = "explicit"

    def __post_init__(self):
        if self.generator not in ("explicit", "cantor"):
            raise ValueError(f"unknown real-string generator {self.generator!r}")
        ent = tuple((Fraction(l), int(m)) for l, m in self.entries)
        if any(l <= 0 or m < 1 for l, m in ent):
            raise ValueError("lengths must be positive, multiplicities >= 1")
        if any(b >= a for (a, _), (b, _) in zip(ent, ent[1:])):
            raise ValueError("lengths must be strictly decreasing")
        object.__setattr__(self, "entries", ent)

    def count_at_least(self, x: Fraction) -> int:
        """Number of intervals (with multiplicity) of length >= x."""
        if self.generator == "cantor":
            big = _cantor_scales_at_least(x)
            return 2**big - 1
        return sum(m for l, m in self.entries if l >= x)

    def tail_below(self, x: Fraction) -> Fraction:
        """Total length of intervals shorter than x, exact."""
        if self.generator == "cantor":
            big = _cantor_scales_at_least(x)
            return Fraction(2, 3) ** big
        return sum((Fraction(l) * m for l, m in self.entries if l < x), Fraction(0))

    def total(self) -> Fraction:
        if self.generator == "cantor":
            return Fraction(1)
        return sum((Fraction(l) * m for l, m in self.entries), Fraction(0))


def _cantor_scales_at_least(x: Fraction) -> int:
    """Largest count K >= 0 of scales n = 1..K with 3^-n >= x."""
    if x > Fraction(1, 3):
        return 0
    k, length = 1, Fraction(1, 9)
    while length >= x:
        k += 1
        length /= 3
    return k


def real_cantor_string() -> RealLengthSpectrum:
    return RealLengthSpectrum(generator="cantor")
