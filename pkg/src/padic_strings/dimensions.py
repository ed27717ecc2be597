"""Complex dimensions: poles of the rational zeta function, organized by vertical line.

Poles in the s variable sit on finitely many vertical lines, each line being a
representative omega plus all integer multiples of i times the oscillatory
period 2 pi / (d log p).  We extract denominator roots in z (companion-matrix
eigenvalues, Newton polishing, exact multiplicities via integer-polynomial
gcd), then map each root to its line representative with the branch fixed so
Im(omega) lies in (-period/2, period/2]; a negative real root lands exactly on
+period/2.

Residues at simple poles are computed two ways and cross-checked: from the
polynomial derivative, P(z)/(Q'(z) z log r), and from the exponent sums
sum_k r^(m_k' w) / (log(1/r) sum_j n_j' r^(n_j' w)) evaluated with fresh
complex exponentials, which exercises the z <-> omega branch choice.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, RootFindingError
from .strings import SelfSimilarSystem
from .zeta import IntPolynomial, RationalZeta, closed_form_zeta, squarefree_decomposition


@dataclass(frozen=True)
class DimensionLine:
    """One vertical line of poles: representative omega, z-root, multiplicity.

    residue is set for simple lines only; higher multiplicities go through
    principal_part_at.
    """

    omega: complex
    z_root: complex
    multiplicity: int
    residue: complex | None


@dataclass(frozen=True)
class DimensionSet:
    lines: tuple[DimensionLine, ...]
    oscillatory_period: float
    D: float

    def to_json_obj(self) -> dict:
        return {
            "D": self.D,
            "period": self.oscillatory_period,
            "lines": [
                {
                    "re": line.omega.real,
                    "im": line.omega.imag,
                    "multiplicity": line.multiplicity,
                    "residue_re": None if line.residue is None else line.residue.real,
                    "residue_im": None if line.residue is None else line.residue.imag,
                }
                for line in self.lines
            ],
        }


def moran_dimension(sys: SelfSimilarSystem) -> float:
    """Unique real Moran root D in (0, 1), with the defining equation rechecked."""
    D = sys.similarity_dimension()
    residual = abs(math.fsum(sys.p ** (-n * D) for n in sys.scaling_exps) - 1.0)
    if residual > 1e-14:
        raise InternalConsistencyError(
            f"Moran root residual {residual} exceeds 1e-14 for {sys}"
        )
    return D


def _horner2(coeffs, z):
    """Value and derivative of an integer polynomial at complex z."""
    f = 0j
    df = 0j
    for a in reversed(coeffs):
        df = df * z + f
        f = f * z + a
    return f, df


def _polish(coeffs, z, iterations=60):
    for _ in range(iterations):
        f, df = _horner2(coeffs, z)
        if df == 0:
            break
        step = f / df
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def _roots_of_int_poly(poly: IntPolynomial, tol: float) -> list[tuple[complex, int]]:
    """Roots with exact multiplicities: Yun factors, then eigenvalues + Newton."""
    out: list[tuple[complex, int]] = []
    for factor, mult in squarefree_decomposition(poly):
        coeffs = factor.coeffs
        raw = np.roots([float(a) for a in reversed(coeffs)])
        polished = []
        for z in raw:
            z = _polish(coeffs, complex(z))
            if abs(z.imag) <= 1e-10 * max(1.0, abs(z)):
                z = complex(z.real, 0.0)
            polished.append(z)
        for z in polished:
            f, _ = _horner2(coeffs, z)
            scale = sum(abs(a) for a in coeffs) * max(1.0, abs(z)) ** factor.degree
            if abs(f) > tol * scale:
                raise RootFindingError(
                    f"root polish failed at z ~ {z} (|value| = {abs(f)})", poly.coeffs
                )
            out.append((z, mult))
    if sum(m for _, m in out) != poly.degree:
        raise RootFindingError("root count does not match the degree", poly.coeffs)
    out.sort(key=lambda zm: (abs(zm[0]), zm[0].real, zm[0].imag))
    return out


def denominator_roots(rz: RationalZeta, tol: float = 1e-10) -> list[tuple[complex, int]]:
    """All denominator roots in z with multiplicities; counts match the degree."""
    if rz.den.degree < 1:
        raise ValueError("denominator has no roots (degree 0)")
    return _roots_of_int_poly(rz.den, tol)


def _omega_of_root(z: complex, p: int, d: int) -> complex:
    """Map a z-root to its line representative with Im(omega) in (-period/2, period/2].

    omega = -Log(z)/(d log p); a root on the negative real axis (arg = pi)
    is sent to +period/2, matching the half-period offset lines.
    """
    step = d * math.log(p)
    period = 2 * math.pi / step
    re = -math.log(abs(z)) / step
    arg = math.atan2(z.imag, z.real)  # in (-pi, pi]
    im = -arg / step  # in [-period/2, period/2)
    if arg == math.pi or im <= -period / 2 * (1 - 1e-15):
        im = period / 2
    if im == 0.0:
        im = 0.0  # normalize -0.0 away
    return complex(re, im)


def _sorted_lines(lines: list[DimensionLine]) -> list[DimensionLine]:
    """Decreasing Re(omega); ties (within root-polish noise) cluster together,
    with the real representative first, then by imaginary part."""
    reals = sorted((ln.omega.real for ln in lines), reverse=True)
    clusters: list[float] = []
    for v in reals:
        if not clusters or clusters[-1] - v > 1e-9 * max(1.0, abs(v)):
            clusters.append(v)

    def cluster_of(v: float) -> int:
        for i, c in enumerate(clusters):
            if abs(v - c) <= 1e-9 * max(1.0, abs(c)):
                return i
        return len(clusters)

    return sorted(
        lines,
        key=lambda ln: (cluster_of(ln.omega.real), abs(ln.omega.imag), ln.omega.imag),
    )


def dimension_set_from_zeta(rz: RationalZeta, tol: float = 1e-10) -> DimensionSet:
    """Lines of poles of the rational zeta, sorted by decreasing real part."""
    roots = denominator_roots(rz, tol)
    period = 2 * math.pi / (rz.d * math.log(rz.p))
    lines = []
    for z, mult in roots:
        omega = _omega_of_root(z, rz.p, rz.d)
        residue = _residue_from_derivative(rz, z) if mult == 1 else None
        lines.append(DimensionLine(omega, z, mult, residue))
    lines = _sorted_lines(lines)
    return DimensionSet(tuple(lines), period, lines[0].omega.real)


def complex_dimensions(sys: SelfSimilarSystem) -> DimensionSet:
    """Full lattice structure of the system's complex dimensions.

    The leading line must be real, simple, with real part equal to the Moran
    dimension, and carry the maximal real part; it is the only line on the
    real axis.  Other lines may tie with Re = D (this happens exactly when
    the scaling exponents share a finer gcd than all exponents together,
    e.g. ratios (1/4, 1/4) with gap 1/2 at p = 2), but never exceed it.
    Violations raise InternalConsistencyError.
    """
    rz = closed_form_zeta(sys)
    ds = dimension_set_from_zeta(rz)
    first = ds.lines[0]
    D = moran_dimension(sys)
    if first.omega.imag != 0.0 or first.multiplicity != 1:
        raise InternalConsistencyError("leading dimension line is not real and simple")
    if abs(first.omega.real - D) > 1e-12:
        raise InternalConsistencyError(
            f"leading line {first.omega.real} disagrees with Moran root {D}"
        )
    if not 0 < first.omega.real < 1:
        raise InternalConsistencyError(f"dimension {first.omega.real} outside (0, 1)")
    for other in ds.lines[1:]:
        if other.omega.real > first.omega.real + 1e-12:
            raise InternalConsistencyError(
                f"line at Re = {other.omega.real} exceeds the Moran dimension {D}"
            )
        if other.omega.imag == 0.0:
            raise InternalConsistencyError(
                f"unexpected second real dimension line at {other.omega.real}"
            )
    return ds


def _residue_from_derivative(rz: RationalZeta, z: complex) -> complex:
    ln_r = -rz.d * math.log(rz.p)
    q_prime = complex(rz.den.derivative()(z))
    return complex(rz.num(z)) / (q_prime * z * ln_r)


def _residue_from_exponent_sums(rz: RationalZeta, omega: complex) -> complex:
    ln_r = -rz.d * math.log(rz.p)
    num = 0j
    for k, c in enumerate(rz.num.coeffs):
        if c:
            num += c * cmath.exp(k * omega * ln_r)
    den = 0j
    for j, c in enumerate(rz.den.coeffs):
        if j and c:
            den += j * (-c) * cmath.exp(j * omega * ln_r)
    return num / (-ln_r * den)


def residue_at(rz: RationalZeta, line: DimensionLine) -> complex:
    """Residue of zeta at the line's poles (independent of the pole index).

    Computes both the z-derivative formula and the exponent-sum formula and
    requires them to agree to 1e-10 relative; disagreement is an internal
    consistency failure.
    """
    if line.multiplicity != 1:
        raise ValueError("pole is not simple; use principal_part_at")
    a = _residue_from_derivative(rz, line.z_root)
    b = _residue_from_exponent_sums(rz, line.omega)
    if abs(a - b) > 1e-10 * max(abs(a), 1e-30):
        raise InternalConsistencyError(
            f"residue formulas disagree at omega = {line.omega}: {a} vs {b}"
        )
    return a


def _series_mul(a: list[complex], b: list[complex], order: int) -> list[complex]:
    out = [0j] * order
    for i, ai in enumerate(a):
        if i >= order:
            break
        for j, bj in enumerate(b):
            if i + j >= order:
                break
            out[i + j] += ai * bj
    return out


def _series_div(a: list[complex], b: list[complex], order: int) -> list[complex]:
    """a(t)/b(t) as a power series to the given order; b[0] must be nonzero."""
    out = [0j] * order
    inv0 = 1.0 / b[0]
    for k in range(order):
        acc = a[k] if k < len(a) else 0j
        for j in range(1, k + 1):
            if j < len(b):
                acc -= b[j] * out[k - j]
        out[k] = acc * inv0
    return out


def principal_part_at(rz: RationalZeta, line: DimensionLine, order: int) -> tuple[complex, ...]:
    """Laurent coefficients (c_{-order}, ..., c_{-1}) of zeta at s = line.omega.

    Taylor-expands numerator and denominator at the z-root and composes with
    z - z0 = z0 (exp((s - omega) log r) - 1), then divides the power series.
    """
    m = line.multiplicity
    if order > m:
        raise ValueError(f"order {order} exceeds pole multiplicity {m}")
    z0 = line.z_root
    ln_r = -rz.d * math.log(rz.p)
    work = 2 * m + 2  # series order in t = s - omega
    # u(t) = z - z0 as a series in t
    u = [0j] * work
    fact = 1.0
    for j in range(1, work):
        fact *= j
        u[j] = z0 * ln_r**j / fact
    p_taylor = rz.num.taylor_at(z0)
    q_taylor = rz.den.taylor_at(z0)
    # N(t) = P(z0 + u(t)), Dz(t) = Q(z0 + u(t)) via Horner in u
    def compose(taylor: list[complex]) -> list[complex]:
        acc = [0j] * work
        for coeff in reversed(taylor):
            acc = _series_mul(acc, u, work)
            acc[0] += coeff
        return acc

    n_series = compose(p_taylor)
    d_series = compose(q_taylor)
    head = max(abs(x) for x in d_series) or 1.0
    for j in range(m):
        if abs(d_series[j]) > 1e-8 * head:
            raise InternalConsistencyError(
                f"denominator series at {line.omega} does not vanish to order {m}"
            )
    shifted = d_series[m:] + [0j] * m
    quotient = _series_div(n_series, shifted, m)
    # quotient[j] is the coefficient of t^(j - m); c_{-m+j} = quotient[j]
    full = tuple(quotient[:m])
    return full[m - order:]


def zeros_of_zeta(rz: RationalZeta, tol: float = 1e-10) -> list[DimensionLine]:
    """Zero lines of zeta in s: numerator roots mapped like poles; z = 0 drops out."""
    _, reduced = rz.num.strip_zero_root()
    if reduced.degree < 1:
        return []
    roots = _roots_of_int_poly(reduced, tol)
    lines = [
        DimensionLine(_omega_of_root(z, rz.p, rz.d), z, mult, None)
        for z, mult in roots
    ]
    return _sorted_lines(lines)


def residue_by_contour(
    rz: RationalZeta, s_center: complex, radius: float = 1e-3, nodes: int = 64, moment: int = 0
) -> complex:
    """Contour-integral Laurent coefficient c_{-1-moment} at s_center.

    Trapezoid rule on a small circle; spectrally accurate for meromorphic
    integrands, used as an independent check of residues and principal parts.
    """
    from .zeta import zeta_eval  # local import to keep module load light

    total = 0j
    for k in range(nodes):
        theta = 2 * math.pi * k / nodes
        offset = radius * cmath.exp(1j * theta)
        s = s_center + offset
        total += zeta_eval(rz, s) * offset ** (moment + 1)
    return total / nodes
