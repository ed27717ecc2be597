"""Real-line Cantor string counterparts for the side-by-side comparison.

The real Cantor string (lengths 3^-n with multiplicities 2^(n-1)) has the
same zeta function, dimension, oscillatory period, and residues as its 3-adic
counterpart; only the tube kernels differ: (2 eps)^(1-w) / (w (1-w)) on the
real line against eps^(1-w) / (3 (1-w)) in Q_3.  The real tube volume is the
continuous piecewise-linear function

    V(eps) = sum_{l_j >= 2 eps} 2 eps + sum_{l_j < 2 eps} l_j,

computed exactly with closed-form geometric tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dimensions import DimensionSet, dimension_set_from_zeta
from .errors import InternalConsistencyError
from .strings import RealLengthSpectrum, cantor_string_3, real_cantor_string, spectrum_of
from .tubes import TubeSeriesConfig, system_dimension_data, explicit_tube_formula, thin_tube_volume
from .zeta import IntPolynomial, RationalZeta

_D = math.log(2) / math.log(3)
_PERIOD = 2 * math.pi / math.log(3)
_RESIDUE = 1 / (2 * math.log(3))


def real_tube_volume(rls: RealLengthSpectrum, eps) -> Fraction:
    """Exact inner-tube volume of a real fractal string at radius eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    two_eps = 2 * eps
    return two_eps * rls.count_at_least(two_eps) + rls.tail_below(two_eps)


def real_cantor_zeta() -> RationalZeta:
    """The real Cantor string's zeta closed form z/(1 - 2z), z = 3^-s."""
    return RationalZeta(IntPolynomial((0, 1)), IntPolynomial((1, -2)), 3, 1)


def real_cantor_dimensions() -> DimensionSet:
    return dimension_set_from_zeta(real_cantor_zeta())


def real_cantor_tube_closed(eps: float, n_max: int) -> float:
    """Symmetric truncation of the closed tube expansion of the real Cantor string:

        V(eps) = (1/(2 log 3)) sum_w (2 eps)^(1-w) / (w (1-w)) - 2 eps

    over w = D + i n period, valid for eps in (0, 1/6).
    """
    if not 0 < eps < Fraction(1, 6):
        raise ValueError("eps must lie in (0, 1/6)")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n = np.arange(-n_max, n_max + 1)
    w = _D + 1j * _PERIOD * n
    log2e = math.log(2 * eps)
    total = np.sum(np.exp((1 - w) * log2e) / (w * (1 - w)))
    total = complex(_RESIDUE * total)
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise InternalConsistencyError(
            f"conjugate symmetry failed in the real Cantor series: {total.imag}"
        )
    return total.real - 2 * eps


def real_cantor_average_content_numeric(T: float) -> float:
    """Log-Cesaro average of eps^-(1-D) V(eps) for the real Cantor string.

    V is linear in eps between consecutive half-lengths 3^-K / 2, so each
    piece integrates in closed form: on a piece V = 2 eps (2^K - 1) + (2/3)^K.
    """
    if T <= 1:
        raise ValueError("T must exceed 1")
    D = _D
    low = 1.0 / T
    total = 0.0
    k = 0
    while True:
        # piece where 2 eps lies in (3^-(k+1), 3^-k]
        b = min(3.0 ** (-k) / 2.0, 1.0)
        a = max(3.0 ** (-(k + 1)) / 2.0, low)
        if a < b:
            count = 2**k - 1
            tail = (2.0 / 3.0) ** k
            # integral of eps^(D-2) (2 count eps + tail) deps
            total += 2 * count * (b**D - a**D) / D
            total += tail * (b ** (D - 1) - a ** (D - 1)) / (D - 1)
        if 3.0 ** (-(k + 1)) / 2.0 <= low:
            break
        k += 1
    return total / math.log(T)


def real_cantor_average_content_closed() -> float:
    """Closed form 2^-D / ((1 - D) log 2) of the log-Cesaro average."""
    return 2.0 ** (-_D) / ((1 - _D) * math.log(2))


@dataclass(frozen=True)
class ComparisonRow:
    eps: float
    v_cs_direct: Fraction
    v_cs_series: float
    v_cs3_direct: Fraction
    v_cs3_series: float
    g_cs: float
    g_cs3: float


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]
    D: float
    oscillatory_period: float
    residue: float
    dimension_sets_equal: bool
    m_av_cs_numeric: float
    m_av_cs_closed: float
    m_av_cs3_numeric: float

    def to_json_obj(self) -> dict:
        return {
            "D": self.D,
            "oscillatory_period": self.oscillatory_period,
            "residue": self.residue,
            "dimension_sets_equal": self.dimension_sets_equal,
            "m_av_cs_numeric": self.m_av_cs_numeric,
            "m_av_cs_closed": self.m_av_cs_closed,
            "m_av_cs3_numeric": self.m_av_cs3_numeric,
            "rows": [
                {
                    "eps": r.eps,
                    "V_CS_direct": f"{r.v_cs_direct.numerator}/{r.v_cs_direct.denominator}",
                    "V_CS_series": r.v_cs_series,
                    "V_CS3_direct": f"{r.v_cs3_direct.numerator}/{r.v_cs3_direct.denominator}",
                    "V_CS3_series": r.v_cs3_series,
                    "G_CS": r.g_cs,
                    "G_CS3": r.g_cs3,
                }
                for r in self.rows
            ],
        }


def _dimension_sets_match(a: DimensionSet, b: DimensionSet, tol: float = 1e-12) -> bool:
    if len(a.lines) != len(b.lines):
        return False
    if abs(a.D - b.D) > tol or abs(a.oscillatory_period - b.oscillatory_period) > tol:
        return False
    for la, lb in zip(a.lines, b.lines):
        if abs(la.omega - lb.omega) > tol or la.multiplicity != lb.multiplicity:
            return False
        if (la.residue is None) != (lb.residue is None):
            return False
        if la.residue is not None and abs(la.residue - lb.residue) > tol:
            return False
    return True


def comparison_report(eps_grid, n_max: int = 4000) -> ComparisonReport:
    """Side-by-side real vs 3-adic Cantor data on an eps grid in (0, 1/6).

    Asserts that the two strings have identical dimension sets; rows carry
    the exact tube oracles, the truncated series, and the rescaled periodic
    profiles (2 eps)^-(1-D) (V_CS + 2 eps) and eps^-(1-D) V_CS3.
    """
    sys3 = cantor_string_3()
    _, dims3 = system_dimension_data(sys3)
    dims_real = real_cantor_dimensions()
    dims_equal = _dimension_sets_match(dims3, dims_real)
    if not dims_equal:
        raise InternalConsistencyError(
            "real and 3-adic Cantor strings disagree on complex dimensions"
        )
    rls = real_cantor_string()
    ls3 = spectrum_of(sys3)
    cfg = TubeSeriesConfig(n_max=n_max)
    rows = []
    for eps in eps_grid:
        eps_f = float(eps)
        eps_q = Fraction(eps_f)
        v_cs = real_tube_volume(rls, eps_q)
        v_cs3 = thin_tube_volume(ls3, eps_q)
        rows.append(
            ComparisonRow(
                eps=eps_f,
                v_cs_direct=v_cs,
                v_cs_series=real_cantor_tube_closed(eps_f, n_max),
                v_cs3_direct=v_cs3,
                v_cs3_series=explicit_tube_formula(sys3, eps_f, cfg),
                g_cs=(2 * eps_f) ** (-(1 - _D)) * (float(v_cs) + 2 * eps_f),
                g_cs3=eps_f ** (-(1 - _D)) * float(v_cs3),
            )
        )
    T = 3.0**30
    from .minkowski import average_minkowski_content_numeric

    m_cs3 = average_minkowski_content_numeric(ls3, _D, T)
    return ComparisonReport(
        rows=tuple(rows),
        D=_D,
        oscillatory_period=_PERIOD,
        residue=_RESIDUE,
        dimension_sets_equal=dims_equal,
        m_av_cs_numeric=real_cantor_average_content_numeric(T),
        m_av_cs_closed=real_cantor_average_content_closed(),
        m_av_cs3_numeric=m_cs3,
    )
