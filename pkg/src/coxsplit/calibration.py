"""Calibrators between p-values and e-values.

A calibrator is a nonincreasing map of p-values to e-values whose integral
over uniform p is at most 1 (so the output is a valid e-value). Implemented:

* Shafer's calibrator  S(p) = 1/sqrt(p) - 1, with inverse S^-1(e) = (e+1)**-2;
* the one-parameter family  p -> eps * p**(eps-1), 0 < eps < 1;
* the VS bound  sup_eps of the family, which is an upper envelope only and
  NOT itself a valid e-value (it is flagged as such everywhere it is
  serialized).

The reverse direction is essentially unique: e -> min(1, 1/e).

Jeffreys's rule of thumb anchors the two scales: p = 0.05 <-> e = 10**0.5
and p = 0.01 <-> e = 10, which motivates calling e-values above 10**0.5
significant and above 10 highly significant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ValidationError

__all__ = [
    "JEFFREYS_ANCHORS",
    "SHAFER",
    "VS_BOUND",
    "VS_NOT_EVALUE_NOTE",
    "CalibratorKind",
    "SignificanceVerdict",
    "calibrate",
    "e_to_p",
    "epsilon_calibrator",
    "jeffreys_verdict",
    "shafer_inverse",
    "vs_is_supremum",
]

VS_NOT_EVALUE_NOTE = (
    "the VS bound is the upper envelope of the eps * p**(eps-1) calibrator "
    "family and is not a valid e-value"
)

# Jeffreys's anchor points between the p- and e-scales.
JEFFREYS_ANCHORS = {0.05: 10.0**0.5, 0.01: 10.0}

_SIGNIFICANT = 10.0**0.5
_HIGHLY_SIGNIFICANT = 10.0


@dataclass(frozen=True)
class CalibratorKind:
    """Which p-to-e transform to apply.

    variant is one of "shafer", "epsilon" (with parameter eps in (0, 1)),
    or "vs-bound". is_valid_evalue is False for the VS bound.
    """

    variant: str
    eps: float | None = None

    def __post_init__(self):
        if self.variant not in ("shafer", "epsilon", "vs-bound"):
            raise ValidationError(f"unknown calibrator variant {self.variant!r}")
        if self.variant == "epsilon":
            if self.eps is None or not 0.0 < self.eps < 1.0:
                raise ValidationError("epsilon calibrator needs eps strictly between 0 and 1")
        elif self.eps is not None:
            raise ValidationError(f"{self.variant!r} takes no eps parameter")

    @property
    def is_valid_evalue(self) -> bool:
        return self.variant != "vs-bound"

    @property
    def label(self) -> str:
        if self.variant == "epsilon":
            return f"epsilon({self.eps:g})"
        return self.variant


SHAFER = CalibratorKind("shafer")
VS_BOUND = CalibratorKind("vs-bound")


def epsilon_calibrator(eps: float) -> CalibratorKind:
    return CalibratorKind("epsilon", eps=float(eps))


class SignificanceVerdict(enum.Enum):
    NOT_SIGNIFICANT = "not_significant"
    SIGNIFICANT = "significant"
    HIGHLY_SIGNIFICANT = "highly_significant"


def _check_p(p: float) -> float:
    p = float(p)
    if not (math.isfinite(p) and 0.0 < p <= 1.0):
        raise ValidationError("p must lie in (0, 1]")
    return p


def calibrate(p: float, kind: CalibratorKind) -> float:
    """Transform the p-value p by the requested calibrator."""
    p = _check_p(p)
    if kind.variant == "shafer":
        return 1.0 / math.sqrt(p) - 1.0
    if kind.variant == "epsilon":
        return kind.eps * p ** (kind.eps - 1.0)
    # VS bound: 1 above exp(-1), else -exp(-1) / (p * ln p)
    if p > math.exp(-1.0):
        return 1.0
    return -math.exp(-1.0) / (p * math.log(p))


def shafer_inverse(e: float) -> float:
    """p-value that Shafer's calibrator would map to e: (e+1)**-2.

    Not a valid p-value in itself -- it is the p-value one would have
    needed to reach this e-value through S.
    """
    e = float(e)
    if not (math.isfinite(e) and e >= 0.0):
        raise ValidationError("e must be finite and nonnegative")
    return (e + 1.0) ** -2


def e_to_p(e: float) -> float:
    """The essentially unique e-to-p direction: min(1, 1/e)."""
    e = float(e)
    if not e > 0.0:
        raise ValidationError("e must be positive")
    return min(1.0, 1.0 / e)


def jeffreys_verdict(e: float) -> SignificanceVerdict:
    """Classify an e-value by Jeffreys's thresholds (strictly above)."""
    e = float(e)
    if not (math.isfinite(e) and e >= 0.0):
        raise ValidationError("e must be finite and nonnegative")
    if e > _HIGHLY_SIGNIFICANT:
        return SignificanceVerdict.HIGHLY_SIGNIFICANT
    if e > _SIGNIFICANT:
        return SignificanceVerdict.SIGNIFICANT
    return SignificanceVerdict.NOT_SIGNIFICANT


def vs_is_supremum(p: float, eps_grid) -> bool:
    """Check that the VS bound dominates the eps family at p.

    True iff VS(p) >= eps * p**(eps-1) - 1e-12 for every eps in the grid
    and, below the exp(-1) knee, the envelope is attained (within 1e-9)
    at the maximizing parameter eps* = -1/ln p (the root of
    d/d.eps [eps * p**(eps-1)] = p**(eps-1) * (1 + eps * ln p)).
    """
    p = _check_p(p)
    vs = calibrate(p, VS_BOUND)
    for eps in eps_grid:
        if vs < calibrate(p, epsilon_calibrator(eps)) - 1e-12:
            return False
    if p < math.exp(-1.0):
        eps_star = -1.0 / math.log(p)
        if abs(calibrate(p, epsilon_calibrator(eps_star)) - vs) > 1e-9:
            return False
    return True
