"""Effective power of the data-splitting and exact selection procedures.

Setting: m independent samples from normal populations with known common
noise scale, the alternative putting a positive mean on exactly one of
them, summarized by the standardized signal Delta. "Effective power" is
the probability of selecting the correct population AND rejecting at level
alpha; it is a lower bound on power as conventionally defined.

Data splitting selects on the first portion (fraction p of each sample)
and tests the second portion:

    power_split = Phi(-k_alpha + Delta*sqrt(1-p))
                  * Int Phi(v)**(m-1) * phi(v - Delta*sqrt(p)) dv

where Phi(-k_alpha) = alpha. The exact procedure tests the largest of the
m full-sample means at the selection-adjusted single-test level
alpha_m = 1 - (1-alpha)**(1/m):

    power_exact = Int_{k_{alpha_m}}^{inf} Phi(v)**(m-1) * phi(v - Delta) dv
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .numerics import QuadratureSpec, integrate, normal_cdf, normal_pdf, normal_quantile

__all__ = [
    "PowerQuery",
    "PowerCell",
    "alpha_single_from_family",
    "exact_power",
    "format_power",
    "power_table",
    "split_power",
]

# Truncation width for the Phi**(m-1) * phi(v - c) integrands: tail mass
# beyond ten standard deviations is below 1e-22.
_TAIL_WIDTH = 10.0
_QUAD_TOL = 1e-10


@dataclass(frozen=True)
class PowerQuery:
    """One power evaluation: m populations, signal delta, split fraction, level alpha.

    split_fraction is the share of each sample used for selection; the
    exact procedure ignores it.
    """

    m: int
    delta: float
    split_fraction: float
    alpha: float

    def __post_init__(self):
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ValidationError("m must be an integer >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError("alpha must lie strictly between 0 and 1")
        if not 0.0 < self.split_fraction < 1.0:
            raise ValidationError("split_fraction must lie strictly between 0 and 1")
        if not (math.isfinite(self.delta) and self.delta >= 0.0):
            raise ValidationError("delta must be finite and nonnegative")


def _selection_integral(m: int, center: float, lower: float | None = None) -> float:
    """Int Phi(v)**(m-1) * phi(v - center) dv from lower (or -inf) upward."""
    lo = center - _TAIL_WIDTH if lower is None else lower
    hi = center + _TAIL_WIDTH
    if lo >= hi:
        return 0.0  # the whole integrand mass lies below the lower limit
    spec = QuadratureSpec(lo, hi, abs_tolerance=_QUAD_TOL)
    if m == 1:
        return integrate(lambda v: normal_pdf(v - center), spec)
    return integrate(lambda v: normal_cdf(v) ** (m - 1) * normal_pdf(v - center), spec)


def split_power(query: PowerQuery) -> float:
    """Effective level-alpha power of the data-splitting procedure."""
    k_alpha = -normal_quantile(query.alpha)
    p = query.split_fraction
    reject_term = normal_cdf(-k_alpha + query.delta * math.sqrt(1.0 - p))
    select_term = _selection_integral(query.m, query.delta * math.sqrt(p))
    return reject_term * select_term


def alpha_single_from_family(alpha: float, m: int) -> float:
    """Single-test level alpha_m with family level alpha after selection.

    Inverts alpha = 1 - (1 - alpha_m)**m; computed via expm1/log1p so the
    forward map recovers alpha to ~1e-16 even for tiny levels.
    """
    if not (isinstance(m, int) and m >= 1):
        raise ValidationError("m must be an integer >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie strictly between 0 and 1")
    return -math.expm1(math.log1p(-alpha) / m)


def exact_power(query: PowerQuery) -> float:
    """Effective power of testing the largest full-sample mean at level alpha_m."""
    alpha_m = alpha_single_from_family(query.alpha, query.m)
    k_m = -normal_quantile(alpha_m)
    return _selection_integral(query.m, query.delta, lower=k_m)


@dataclass(frozen=True)
class PowerCell:
    """One evaluated table cell; split_fraction is None for the exact procedure."""

    m: int
    delta: float
    alpha: float
    procedure: str  # "split" | "exact"
    split_fraction: float | None
    value: float
    display: str


def format_power(value: float) -> str:
    """Render a power value the way the classical table prints it.

    Values at or above 0.995 keep three decimals (so saturated cells read
    1.000 / 0.998); everything else keeps two significant digits, trailing
    zeros included (0.070, not 0.07).
    """
    if not 0.0 <= value <= 1.0 + 1e-9:
        raise ValidationError(f"power value {value!r} outside [0, 1]")
    if value >= 0.995:
        return f"{min(value, 1.0):.3f}"
    if value <= 0.0:
        return "0.0"
    decimals = 1 - math.floor(math.log10(value))
    return f"{value:.{decimals}f}"


def power_table(alphas, ms, deltas, ps) -> list[PowerCell]:
    """Evaluate the Cartesian grid of split powers plus the exact column.

    Rows follow (alpha, m, delta) order with the split cells for each p
    first and the exact cell last, mirroring the classical layout.
    """
    cells: list[PowerCell] = []
    for alpha in alphas:
        for m in ms:
            for delta in deltas:
                for p in ps:
                    q = PowerQuery(m=m, delta=float(delta), split_fraction=float(p), alpha=float(alpha))
                    v = split_power(q)
                    cells.append(PowerCell(m, float(delta), float(alpha), "split", float(p), v, format_power(v)))
                q = PowerQuery(m=m, delta=float(delta), split_fraction=0.5, alpha=float(alpha))
                v = exact_power(q)
                cells.append(PowerCell(m, float(delta), float(alpha), "exact", None, v, format_power(v)))
    return cells
