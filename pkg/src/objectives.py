"""
src/objectives.py

Objective functions and the evaluation meter that charges every call to a
run's budget.

Objectives:
    f0      — pure noise: every evaluation is a fresh U(0, 1) draw, so
              there is no correlation between any two solutions
    sphere  — Σ(x_i − 0.5)², deterministic; optimum inside [0,1]^n.
              Used as a convergence sanity check for the engine.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core import Domain, RngStream
from src.errors import ConfigurationError

logger = logging.getLogger(__name__)

SPHERE_CENTRE = 0.5


class ObjectiveKind(str, Enum):
    F0 = "f0"
    SPHERE = "sphere"


@dataclass(frozen=True)
class Objective:
    """
    Objective function over a box domain. Defined for every real vector of
    length n, including points outside the domain.
    """

    kind: ObjectiveKind
    domain: Domain

    @classmethod
    def from_name(cls, name: str, domain: Domain) -> "Objective":
        try:
            kind = ObjectiveKind(name.lower())
        except ValueError:
            names = tuple(k.value for k in ObjectiveKind)
            raise ConfigurationError(f"objective must be one of {names}, got '{name}'") from None
        return cls(kind=kind, domain=domain)

    def evaluate(self, point, rng: RngStream) -> float:
        point = self.domain.check_length(point)
        if self.kind is ObjectiveKind.F0:
            return rng.random()
        return float(np.sum((point - SPHERE_CENTRE) ** 2))


def evaluate(obj: Objective, point, rng: RngStream) -> float:
    return obj.evaluate(point, rng)


class BudgetExhausted(RuntimeError):
    pass


class BudgetMeter:
    """
    Wraps an objective and counts evaluations against a fixed budget.
    Every call to evaluate() charges exactly one unit.

    Args:
        objective: The objective to meter
        budget:    Total evaluations allowed for the run
    """

    def __init__(self, objective: Objective, budget: int):
        if budget < 1:
            raise ConfigurationError(f"budget must be positive, got {budget}")
        self.objective = objective
        self.budget = budget
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.budget

    def evaluate(self, point, rng: RngStream) -> float:
        if self.exhausted:
            raise BudgetExhausted(f"evaluation budget of {self.budget} already spent")
        self.used += 1
        return self.objective.evaluate(point, rng)
