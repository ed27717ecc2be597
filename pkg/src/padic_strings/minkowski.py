"""Minkowski dimension fits, average content, and non-measurability certificates.

Every integral over the tube step function is taken in closed form piece by
piece (the volume is constant between consecutive powers of p), so there is
no quadrature anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InternalConsistencyError
from .dimensions import moran_dimension, residue_at
from .strings import LengthSpectrum, SelfSimilarSystem, spectrum_of
from .tubes import system_dimension_data, thin_tube_volume


@dataclass(frozen=True)
class ContentReport:
    D_used: float
    M_av_numeric: float
    M_av_closed: float
    oscillation_ratio: float
    T_used: float

    def to_json_obj(self) -> dict:
        rel = abs(self.M_av_numeric - self.M_av_closed) / abs(self.M_av_closed)
        return {
            "D": self.D_used,
            "M_av_numeric": self.M_av_numeric,
            "M_av_closed": self.M_av_closed,
            "relative_gap": rel,
            "oscillation_ratio": self.oscillation_ratio,
            "T": self.T_used,
        }


def minkowski_dim_fit(ls: LengthSpectrum, eps_grid) -> float:
    """1 minus the least-squares slope of log V against log eps.

    The grid must span at least six decades and stay clear of jump points;
    degenerate grids are rejected.
    """
    eps_values = [Fraction(float(e)) for e in eps_grid]
    if len(eps_values) < 2 or max(eps_values) / min(eps_values) < 10**6:
        raise ValueError("degenerate grid: need >= 2 points spanning >= 6 decades")
    xs, ys = [], []
    for eps in eps_values:
        v = thin_tube_volume(ls, eps)
        if v <= 0:
            raise ValueError(f"tube volume vanishes at eps = {float(eps)}")
        xs.append(math.log(float(eps)))
        ys.append(math.log(float(v)))
    slope = np.polyfit(xs, ys, 1)[0]
    return 1.0 - float(slope)


def average_minkowski_content_numeric(ls: LengthSpectrum, D: float, T: float) -> float:
    """Logarithmic Cesaro average (1/log T) int_{1/T}^1 eps^-(1-D) V(eps) deps/eps.

    V is constant on (p^-(n+1), p^-n], so each piece integrates
    V_n (b^(D-1) - a^(D-1)) / (D - 1) in closed form; T is best taken as a
    power of 1/r so the window covers whole periods.
    """
    if not 0 <= D < 1:
        raise ValueError("D must lie in [0, 1)")
    if T <= 1:
        raise ValueError("T must exceed 1")
    p = ls.p
    low = 1.0 / T
    total = 0.0
    n = 0
    while True:
        b = min(p ** float(-n), 1.0)
        a = max(p ** float(-(n + 1)), low)
        if a < b:
            v_n = float(ls.tail_length(n)) / p
            if v_n:
                total += v_n * (b ** (D - 1) - a ** (D - 1)) / (D - 1)
        if p ** float(-(n + 1)) <= low:
            break
        n += 1
    return total / math.log(T)


def average_minkowski_content_closed(sys: SelfSimilarSystem) -> float:
    """Closed form res(zeta; D) / (p (1 - D)), cross-checked against the
    explicit exponent-sum expression to 1e-12."""
    rz, ds = system_dimension_data(sys)
    D = ds.D
    res = residue_at(rz, ds.lines[0]).real
    value = res / (sys.p * (1 - D))
    r = float(sys.r)
    num = math.fsum(r ** (m * D) for m in sys.reduced_gap_exps)
    den = math.log(1 / r) * math.fsum(
        n * r ** (n * D) for n in sys.reduced_scaling_exps
    )
    explicit = num / den / (sys.p * (1 - D))
    if abs(value - explicit) > 1e-12 * max(abs(value), 1e-30):
        raise InternalConsistencyError(
            f"average-content expressions disagree: {value} vs {explicit}"
        )
    return value


def measurability_diagnostic(sys: SelfSimilarSystem, eps0: float, samples: int = 200) -> float:
    """sup/inf of eps^-(1-D) V(eps) over one multiplicative period [eps0 r, eps0].

    A ratio above 1 + 1e-6 certifies (at sampled resolution) that the limit
    defining the Minkowski content cannot exist.
    """
    largest = float(Fraction(1, sys.p ** min(sys.gap_exps)))
    if not 0 < eps0 <= largest:
        raise ValueError(f"eps0 must lie in (0, {largest}] (below the largest length)")
    D = moran_dimension(sys)
    ls = spectrum_of(sys)
    r = float(sys.r)
    values = []
    for i in range(samples):
        eps = eps0 * r ** (i / (samples - 1))
        g = eps ** (-(1 - D)) * float(thin_tube_volume(ls, Fraction(eps)))
        values.append(g)
    return max(values) / min(values)


def content_report(sys: SelfSimilarSystem, T: float | None = None) -> ContentReport:
    D = moran_dimension(sys)
    if T is None:
        T = float(1 / sys.r) ** 40
    ls = spectrum_of(sys)
    numeric = average_minkowski_content_numeric(ls, D, T)
    closed = average_minkowski_content_closed(sys)
    eps0 = 0.9 * float(Fraction(1, sys.p ** min(sys.gap_exps)))
    ratio = measurability_diagnostic(sys, eps0)
    return ContentReport(D, numeric, closed, ratio, float(T))
