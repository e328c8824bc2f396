"""
src/analysis.py

POIS statistics and the closed-form infeasibility model.

    Edpois                     — POIS values of one configuration over a run series
    classify()                 — teal / orange / violet band classification
    summarize()                — min, max, mean, median, standard deviation
    prob_infeasible(p, n)      — 1 − (1 − p)^n, stable for tiny p
    p_max(t, n)                — largest p with 1 − (1 − p)^n ≤ t
    tabulate_pmax()            — the p_max surface over (t, n) grids
    monte_carlo_infeasibility  — simulation oracle for prob_infeasible
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core import RngStream
from src.errors import ArgumentError

logger = logging.getLogger(__name__)

# Closed bands; a series entirely inside the teal bands is teal, one inside
# orange-or-teal bands (with at least one orange value) is orange.
TEAL_BANDS = ((0.0, 0.001), (0.999, 1.0))
ORANGE_BANDS = ((0.001, 0.01), (0.99, 0.999))

MC_BLOCK_TRIALS = 10_000


class ColorClass(str, Enum):
    TEAL = "teal"
    ORANGE = "orange"
    VIOLET = "violet"


# ── EDPOIS ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Edpois:
    """
    Empirical distribution of POIS for one configuration.

    Args:
        pois_values:   One POIS per run, in run-index order
        config_ref:    Identifier of the configuration (label or config_id)
        expected_runs: Series length m the sweep asked for; None means len(pois_values)
    """

    pois_values: tuple[float, ...]
    config_ref: str = ""
    expected_runs: int | None = None

    def __post_init__(self):
        values = tuple(float(v) for v in self.pois_values)
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise ArgumentError(f"POIS values must lie in [0, 1], got {v}")
        object.__setattr__(self, "pois_values", values)

    @property
    def m(self) -> int:
        return len(self.pois_values)

    @property
    def complete(self) -> bool:
        return self.expected_runs is None or self.m >= self.expected_runs

    @property
    def color_class(self) -> "ColorClass":
        return classify(self)


def _values(edpois) -> tuple[float, ...]:
    values = edpois.pois_values if isinstance(edpois, Edpois) else tuple(edpois)
    if not values:
        raise ArgumentError("an empty POIS series cannot be classified or summarised")
    return values


def _in_bands(value: float, bands) -> bool:
    return any(lo <= value <= hi for lo, hi in bands)


def classify(edpois) -> ColorClass:
    """Teal → orange → violet, by containment of every value in the bands."""
    values = _values(edpois)
    if all(_in_bands(v, TEAL_BANDS) for v in values):
        return ColorClass.TEAL
    if all(_in_bands(v, TEAL_BANDS + ORANGE_BANDS) for v in values):
        return ColorClass.ORANGE
    return ColorClass.VIOLET


@dataclass(frozen=True)
class EdpoisSummary:
    count: int
    minimum: float
    maximum: float
    mean: float
    median: float
    std: float


def summarize(edpois) -> EdpoisSummary:
    """Order statistics and moments; std is the population standard deviation."""
    values = np.array(_values(edpois), dtype=float)
    return EdpoisSummary(
        count=len(values),
        minimum=float(values.min()),
        maximum=float(values.max()),
        mean=float(values.mean()),
        median=float(np.median(values)),
        std=float(values.std()),
    )


def edpois_from_table(table, runs_per_config: int | None = None) -> list[Edpois]:
    """
    Group successful rows of a ResultsTable by config_id, in run-index order.

    Failed rows do not contribute a value, so their series come out
    incomplete. When runs_per_config is None the largest run_index + 1 seen
    anywhere in the table is taken as the expected series length.
    """
    series: dict[int, list] = defaultdict(list)
    labels: dict[int, str] = {}
    expected = runs_per_config or 0
    for row in table.rows:
        labels[row.config_id] = row.label
        if runs_per_config is None:
            expected = max(expected, row.run_index + 1)
        if not row.failed:
            series[row.config_id].append((row.run_index, row.pois))

    result = []
    for config_id in sorted(labels):
        values = tuple(p for _, p in sorted(series[config_id]))
        result.append(Edpois(pois_values=values, config_ref=labels[config_id], expected_runs=expected))
    return result


# ── Probability model ─────────────────────────────────────────────────────────

def _check_n(n: int):
    if int(n) != n or n < 1:
        raise ArgumentError(f"dimensionality must be a positive integer, got {n}")


def prob_infeasible(p: float, n: int) -> float:
    """
    Probability that a solution is infeasible in at least one of n
    independent dimensions, each infeasible with probability p.
    Computed as −expm1(n·log1p(−p)).
    """
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}")
    _check_n(n)
    if p == 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-p))


def p_max(t: float, n: int) -> float:
    """Largest p with 1 − (1 − p)^n ≤ t, i.e. 1 − (1 − t)^(1/n)."""
    if not 0.0 <= t < 1.0:
        raise ArgumentError(f"t must lie in [0, 1), got {t}")
    _check_n(n)
    if t == 0.0:
        return 0.0
    return -math.expm1(math.log1p(-t) / n)


@dataclass(frozen=True)
class PmaxTable:
    """values[j, i] = p_max(t_grid[i], n_grid[j]): one row per n, one column per t."""

    t_grid: tuple[float, ...]
    n_grid: tuple[int, ...]
    values: np.ndarray

    def rows(self) -> list[list]:
        """CSV-ready rows: header then one row per n."""
        header = ["n"] + [f"{t:.17g}" for t in self.t_grid]
        body = [
            [str(n)] + [f"{v:.17g}" for v in self.values[j]]
            for j, n in enumerate(self.n_grid)
        ]
        return [header] + body


def tabulate_pmax(t_grid, n_grid) -> PmaxTable:
    t_grid = tuple(float(t) for t in t_grid)
    n_grid = tuple(int(n) for n in n_grid)
    if not t_grid or not n_grid:
        raise ArgumentError("t_grid and n_grid must both be non-empty")
    values = np.array([[p_max(t, n) for t in t_grid] for n in n_grid], dtype=float)
    return PmaxTable(t_grid=t_grid, n_grid=n_grid, values=values)


def monte_carlo_infeasibility(p: float, n: int, trials: int, rng: RngStream) -> float:
    """
    Fraction of simulated solutions that are infeasible in at least one
    dimension, with each dimension independently infeasible with probability p.
    """
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}")
    _check_n(n)
    if trials < 1:
        raise ArgumentError(f"trials must be ≥ 1, got {trials}")

    hits = 0
    done = 0
    while done < trials:
        block = min(MC_BLOCK_TRIALS, trials - done)
        draws = rng.generator.random((block, n)) < p
        hits += int(np.count_nonzero(draws.any(axis=1)))
        done += block
    return hits / trials
