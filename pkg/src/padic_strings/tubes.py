"""Inner tube volumes, two independent ways.

The oracle is the exact step function: for eps > 0 the thin inner tube of a
string with lengths p^-n has volume p^-1 times the total length of the
intervals strictly shorter than eps, an exact rational (tails summed in
closed form).  The explicit series expresses the same volume as a sum of
residues of the tubular zeta function zeta(s) eps^(1-s) / (p (1-s)) over the
complex dimensions, truncated symmetrically in the imaginary direction.

Poles are selected by |Im(omega)| <= (n_max + 1/2) * period, which pairs
every pole with its conjugate (also across half-period-offset lines), so the
truncated sum is real up to rounding; the residual imaginary part is asserted
below 1e-10.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InternalConsistencyError
from .dimensions import (
    DimensionLine,
    DimensionSet,
    complex_dimensions,
    dimension_set_from_zeta,
    principal_part_at,
    residue_at,
)
from .strings import LengthSpectrum, SelfSimilarSystem, euler_string, spectrum_of
from .zeta import RationalZeta, closed_form_zeta, euler_closed_form


@dataclass(frozen=True)
class TubeSeriesConfig:
    """Truncation controls for the residue series."""

    n_max: int = 2000
    line_selection: str = "all"  # "all" | "first-only"
    summation: str = "raw"  # "raw" symmetric | "cesaro" averaged

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.line_selection not in ("all", "first-only"):
            raise ValueError(f"unknown line_selection {self.line_selection!r}")
        if self.summation not in ("raw", "cesaro"):
            raise ValueError(f"unknown summation mode {self.summation!r}")


def _as_fraction(eps) -> Fraction:
    x = Fraction(eps)
    if x <= 0:
        raise ValueError("eps must be positive")
    return x


def _floor_log_p(x: Fraction, p: int) -> int:
    """Largest K with p^K <= x, exact on rationals."""
    if x <= 0:
        raise ValueError("x must be positive")
    k = 0
    if x >= 1:
        acc = Fraction(p)
        while acc <= x:
            acc *= p
            k += 1
        return k
    acc = x
    while acc < 1:
        acc *= p
        k -= 1
    return k


def cutoff_scale(eps, p: int) -> int:
    """Largest K with p^-K >= eps: intervals of exponent > K count as 'short'."""
    return _floor_log_p(1 / _as_fraction(eps), p)


def thin_tube_volume(ls: LengthSpectrum, eps) -> Fraction:
    """Exact volume of the thin inner eps-neighborhood: p^-1 sum of short lengths."""
    k = cutoff_scale(eps, ls.p)
    return ls.tail_length(k) / ls.p


def thick_tube_volume(ls: LengthSpectrum, eps) -> Fraction:
    """Exact thick volume: spheres of long intervals plus all short intervals."""
    k = cutoff_scale(eps, ls.p)
    head = ls.head_length(k)
    tail = ls.tail_length(k)
    return (1 - Fraction(1, ls.p)) * head + tail


def boundary_measure(ls: LengthSpectrum) -> Fraction:
    """Measure of the metric boundary: (1 - 1/p) times the total length."""
    return (1 - Fraction(1, ls.p)) * ls.zeta_one()


def fourier_frac_pow(b: float, x: float, n_max: int) -> float:
    """Symmetric partial sum of the Fourier series of b^-frac(x), b in (0, 1).

    Integer x is rejected: at the jumps the series converges to the midpoint
    (1 + 1/b)/2 rather than to the function value.
    """
    if not 0 < b < 1:
        raise ValueError("b must lie in (0, 1)")
    if float(x).is_integer():
        raise ValueError("x must not be an integer (jump point of b^-frac(x))")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    log_b = math.log(b)
    n = np.arange(1, n_max + 1, dtype=float)
    phase = np.exp(2j * math.pi * n * x)
    total = 1.0 / log_b + np.sum(
        phase / (log_b + 2j * math.pi * n) + np.conj(phase) / (log_b - 2j * math.pi * n)
    )
    return float(((b - 1.0) / b) * total.real)


def _taylor_of_kernel(omega: complex, eps: float, p: int, order: int) -> list[complex]:
    """Taylor coefficients at omega of f(s) = eps^(1-s) / (p (1-s))."""
    lead = cmath.exp((1 - omega) * math.log(eps)) / (p * (1 - omega))
    # f(omega + h) = lead * exp(-h log eps) * 1/(1 - h/(1-omega))
    le = math.log(eps)
    inv = 1.0 / (1 - omega)
    expo = [1.0 + 0j]
    geom = [1.0 + 0j]
    for k in range(1, order):
        expo.append(expo[-1] * (-le) / k)
        geom.append(geom[-1] * inv)
    out = []
    for k in range(order):
        out.append(lead * sum(expo[j] * geom[k - j] for j in range(k + 1)))
    return out


def tubular_residue(
    rz: RationalZeta, line: DimensionLine, n: int, eps: float
) -> complex:
    """Residue of zeta(s) eps^(1-s) / (p (1-s)) at the pole omega + i n period."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    period = 2 * math.pi / (rz.d * math.log(rz.p))
    pole = line.omega + 1j * n * period
    if abs(pole - 1) < 1e-12:
        raise InternalConsistencyError("tubular kernel pole collision at s = 1")
    if line.multiplicity == 1:
        res = residue_at(rz, line)
        return res * cmath.exp((1 - pole) * math.log(eps)) / (rz.p * (1 - pole))
    coeffs = principal_part_at(rz, line, line.multiplicity)  # c_{-m} .. c_{-1}
    kernel = _taylor_of_kernel(pole, eps, rz.p, line.multiplicity)
    m = line.multiplicity
    total = 0j
    for j in range(1, m + 1):  # c_{-j} pairs with kernel derivative order j-1
        total += coeffs[m - j] * kernel[j - 1]
    return total


def _line_pole_indices(line: DimensionLine, period: float, n_max: int) -> np.ndarray:
    """Pole indices n with |Im(omega) + n period| <= (n_max + 1/2) period,
    ordered by increasing |Im| so truncation is symmetric in the window."""
    beta = line.omega.imag
    cut = (n_max + 0.5) * period * (1 + 1e-12)
    lo = math.ceil((-cut - beta) / period)
    hi = math.floor((cut - beta) / period)
    n = np.arange(lo, hi + 1)
    order = np.argsort(np.abs(beta + n * period), kind="stable")
    return n[order]


def _series_volume(
    rz: RationalZeta, ds: DimensionSet, eps: float, cfg: TubeSeriesConfig
) -> float:
    if eps <= 0:
        raise ValueError("eps must be positive")
    period = ds.oscillatory_period
    lines = ds.lines[:1] if cfg.line_selection == "first-only" else ds.lines
    log_eps = math.log(eps)
    total = 0j
    for line in lines:
        n_vals = _line_pole_indices(line, period, cfg.n_max)
        poles = line.omega + 1j * period * n_vals
        if line.multiplicity == 1:
            res = residue_at(rz, line)
            exponents = 1 - poles
            terms = res * np.exp(exponents * log_eps) / (rz.p * exponents)
        else:
            terms = np.array(
                [tubular_residue(rz, line, int(n), eps) for n in n_vals]
            )
        if cfg.summation == "cesaro":
            # average partial sums over conjugate-complete shells (equal |Im|),
            # so every Cesaro iterate is real up to rounding
            abs_im = np.abs((line.omega + 1j * period * n_vals).imag)
            ends = [
                i
                for i in range(len(abs_im))
                if i + 1 == len(abs_im) or abs_im[i + 1] - abs_im[i] > period / 4
            ]
            partial = np.cumsum(terms)
            total += np.mean(partial[ends])
        else:
            total += np.sum(terms)
    total = complex(total)
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise InternalConsistencyError(
            f"conjugate symmetry failed: imaginary residual {total.imag}"
        )
    return total.real


@lru_cache(maxsize=None)
def system_dimension_data(sys: SelfSimilarSystem) -> tuple[RationalZeta, DimensionSet]:
    """Memoized (closed-form zeta, dimension set) of a self-similar system."""
    rz = closed_form_zeta(sys)
    return rz, complex_dimensions(sys)


@lru_cache(maxsize=None)
def euler_dimension_data(p: int) -> tuple[RationalZeta, DimensionSet]:
    """Memoized (closed-form zeta, dimension set) of the Euler string."""
    rz = euler_closed_form(p)
    return rz, dimension_set_from_zeta(rz)


def explicit_tube_formula(
    sys: SelfSimilarSystem, eps: float, cfg: TubeSeriesConfig
) -> float:
    """Residue-series tube volume of a self-similar string.

    Valid for 0 < eps < g_K / r_N (the exact tube formula's range); the
    imaginary part of the truncated sum must vanish to 1e-10.
    """
    bound = float(sys.validity_eps_bound())
    if not 0 < eps < bound:
        raise ValueError(f"eps = {eps} outside the validity range (0, {bound})")
    rz, ds = system_dimension_data(sys)
    return _series_volume(rz, ds, eps, cfg)


def euler_tube_series(p: int, eps: float, cfg: TubeSeriesConfig) -> float:
    """Residue-series tube volume of the Euler string (single line at omega = 0)."""
    rz, ds = euler_dimension_data(p)
    return _series_volume(rz, ds, eps, cfg)


def periodic_G(sys: SelfSimilarSystem, u: int, x: float, n_max: int) -> complex:
    """Periodic line profile G_u(x) = (res_u / p) sum_n e^(2 pi i n x) / (1 - omega_u - i n period).

    u is 1-based in the line order (u = 1 is the leading line through D).
    """
    rz, ds = system_dimension_data(sys)
    if not 1 <= u <= len(ds.lines):
        raise ValueError(f"line index {u} out of range 1..{len(ds.lines)}")
    line = ds.lines[u - 1]
    if line.multiplicity != 1:
        raise ValueError("periodic profile defined here for simple lines only")
    res = residue_at(rz, line)
    period = ds.oscillatory_period
    n = np.arange(-n_max, n_max + 1)
    denom = 1 - line.omega - 1j * period * n
    value = np.sum(np.exp(2j * math.pi * n * x) / denom)
    return complex(res / sys.p * value)


def truncated_tube(
    sys: SelfSimilarSystem, eps: float, n_max: int
) -> tuple[float, float]:
    """Leading-line tube volume eps^(1-D) G_1(log_{1/r} eps^-1) and error exponent.

    Returns (main_term, delta) where the full volume satisfies
    eps^-(1-D) |V(eps) - main| = O(eps^delta): delta = D - Re(omega_2), or D
    when only one line exists.  delta is clamped at 0 for systems whose
    second line ties with Re = D (no power-law gain in that case).
    """
    rz, ds = system_dimension_data(sys)
    D = ds.D
    x = math.log(1 / eps) / (sys.d * math.log(sys.p))
    main = (eps ** (1 - D)) * periodic_G(sys, 1, x, n_max).real
    if len(ds.lines) > 1:
        delta = max(D - ds.lines[1].omega.real, 0.0)
    else:
        delta = D
    return main, delta


def tube_table(
    ls: LengthSpectrum,
    series_fn,
    eps_values,
    n_max: int,
) -> list[dict]:
    """Rows (eps, V_direct, V_series, abs_error, n_max) for a grid of eps."""
    cfg = TubeSeriesConfig(n_max=n_max)
    rows = []
    for eps in eps_values:
        exact = thin_tube_volume(ls, Fraction(float(eps)))
        approx = series_fn(float(eps), cfg)
        rows.append(
            {
                "eps": float(eps),
                "V_direct": exact,
                "V_series": approx,
                "abs_error": abs(float(exact) - approx),
                "n_max": n_max,
            }
        )
    return rows


def system_tube_rows(sys: SelfSimilarSystem, eps_values, n_max: int) -> list[dict]:
    ls = spectrum_of(sys)
    return tube_table(ls, lambda e, cfg: explicit_tube_formula(sys, e, cfg), eps_values, n_max)


def euler_tube_rows(p: int, eps_values, n_max: int) -> list[dict]:
    ls = euler_string(p)
    return tube_table(ls, lambda e, cfg: euler_tube_series(p, e, cfg), eps_values, n_max)


def grid_avoiding_jumps(
    start: float, stop: float, count: int, p: int, d: int, margin: float = 0.12
) -> list[float]:
    """Log-spaced eps grid keeping a margin (in period units) from the jump points.

    Jumps of the step function sit where log_{p^d}(1/eps) is an integer; grid
    points whose fractional part falls within the margin are nudged to the
    margin boundary.  Deterministic.
    """
    if count < 1 or start <= 0 or stop <= 0:
        raise ValueError("need positive bounds and count >= 1")
    eps = np.geomspace(start, stop, count)
    step = d * math.log(p)
    x = np.log(1.0 / eps) / step
    frac = x - np.floor(x)
    frac = np.clip(frac, margin, 1.0 - margin)
    x = np.floor(x) + frac
    return [float(v) for v in np.exp(-x * step)]
