"""
src/boundary.py

Strategies for dealing with infeasible solutions. Each maps a generated
point (possibly outside the box) to the point that is actually evaluated.

Strategies:
    saturation  — clamp each violating coordinate onto the nearest bound
    toroidal    — the domain is a ring: wrap modulo the interval width
    mirror      — reflect off the violated bound (triangular fold, any overshoot)
    cotn        — resample violating coordinates from a one-tailed normal
                  hugging the violated bound, until inside
    penalty     — leave the point alone; the engine gives it a fitness
                  worse than anything attainable so selection rejects it

All five act per coordinate and leave feasible coordinates bit-identical.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core import Domain, RngStream, contains
from src.errors import ConfigurationError, NumericError

logger = logging.getLogger(__name__)

COTN_SIGMA = 1.0 / 3.0          # standard deviation of the one-tailed normal
PENALTY_FITNESS = math.inf      # strictly worse than any attainable objective value


class Strategy(str, Enum):
    SATURATION = "saturation"
    TOROIDAL = "toroidal"
    MIRROR = "mirror"
    COTN = "cotn"
    PENALTY = "penalty"

    @classmethod
    def from_name(cls, name: str) -> "Strategy":
        try:
            return cls(name.lower())
        except ValueError:
            names = tuple(s.value for s in cls)
            raise ConfigurationError(f"strategy must be one of {names}, got '{name}'") from None


@dataclass(frozen=True)
class CorrectionOutcome:
    corrected: np.ndarray
    was_infeasible: bool
    penalty_applied: bool = False


def _violations(point: np.ndarray, domain: Domain) -> np.ndarray:
    return (point < domain.lower_array) | (point > domain.upper_array)


# ── Deterministic repairs ─────────────────────────────────────────────────────

def saturate(point, domain: Domain) -> np.ndarray:
    """Clamp every coordinate to [a_i, b_i]."""
    point = domain.check_length(point)
    return np.clip(point, domain.lower_array, domain.upper_array)


def toroidal(point, domain: Domain) -> np.ndarray:
    """Wrap violating coordinates: x ← a_i + ((x − a_i) mod (b_i − a_i))."""
    point = domain.check_length(point)
    out = point.copy()
    bad = _violations(point, domain)
    if bad.any():
        lo, width = domain.lower_array[bad], domain.width_array[bad]
        out[bad] = lo + np.mod(point[bad] - lo, width)
        # rounding in lo + r can land one ulp past b_i
        out[bad] = np.minimum(out[bad], domain.upper_array[bad])
    return out


def mirror(point, domain: Domain) -> np.ndarray:
    """Fold violating coordinates back by reflection, period 2(b_i − a_i)."""
    point = domain.check_length(point)
    out = point.copy()
    bad = _violations(point, domain)
    if bad.any():
        lo, width = domain.lower_array[bad], domain.width_array[bad]
        phase = np.mod(point[bad] - lo, 2.0 * width)
        folded = np.where(phase <= width, phase, 2.0 * width - phase)
        out[bad] = np.clip(lo + folded, lo, domain.upper_array[bad])
    return out


# ── Stochastic repair ─────────────────────────────────────────────────────────

def _one_tailed_draw(rng: RngStream) -> float:
    """|N(0, σ)| resampled until it lies in [0, 1]."""
    while True:
        u = abs(rng.normal(COTN_SIGMA))
        if u <= 1.0:
            return u


def cotn(point, domain: Domain, rng: RngStream) -> np.ndarray:
    """
    Complete one-tailed normal correction.

    Works in normalised [0, 1] coordinates: a coordinate below its lower
    bound becomes |N(0, σ)|, one above its upper bound becomes 1 − |N(0, σ)|,
    then it is mapped back to [a_i, b_i]. Violating coordinates are redrawn
    in index order.
    """
    point = domain.check_length(point)
    out = point.copy()
    lower, upper, width = domain.lower_array, domain.upper_array, domain.width_array
    for i in np.flatnonzero(_violations(point, domain)):
        u = _one_tailed_draw(rng)
        unit = u if point[i] < lower[i] else 1.0 - u
        out[i] = min(max(lower[i] + unit * width[i], lower[i]), upper[i])
    return out


# ── Penalty ───────────────────────────────────────────────────────────────────

def apply_penalty(point, domain: Domain) -> CorrectionOutcome:
    """Coordinates unchanged; an infeasible point is flagged for the penalty fitness."""
    point = domain.check_length(point)
    infeasible = not contains(domain, point)
    return CorrectionOutcome(corrected=point, was_infeasible=infeasible, penalty_applied=infeasible)


# ── Dispatch ──────────────────────────────────────────────────────────────────

_REPAIRS = {
    Strategy.SATURATION: saturate,
    Strategy.TOROIDAL: toroidal,
    Strategy.MIRROR: mirror,
}


def correct(strategy: Strategy, point, domain: Domain, rng: RngStream) -> CorrectionOutcome:
    """
    Apply strategy to point. Feasible points pass through untouched.

    Raises:
        ConfigurationError: unknown strategy name
        NumericError:       point has a NaN or infinite coordinate
    """
    if not isinstance(strategy, Strategy):
        strategy = Strategy.from_name(strategy)
    point = domain.check_length(point)
    if not np.all(np.isfinite(point)):
        raise NumericError(f"non-finite coordinate in generated point ({strategy.value} cannot repair it)")

    if strategy is Strategy.PENALTY:
        return apply_penalty(point, domain)
    if contains(domain, point):
        return CorrectionOutcome(corrected=point, was_infeasible=False)
    if strategy is Strategy.COTN:
        corrected = cotn(point, domain, rng)
    else:
        corrected = _REPAIRS[strategy](point, domain)
    return CorrectionOutcome(corrected=corrected, was_infeasible=True)
