"""
src/de_engine.py

The Differential Evolution loop, instrumented to count how many generated
solutions fall outside the feasible box.

Mutations (donor indices are mutually distinct, drawn uniformly; they may
coincide with the target):
    rand1             x_r1 + F(x_r2 − x_r3)
    rand2             x_r1 + F(x_r2 − x_r3) + F(x_r4 − x_r5)
    best1             x_best + F(x_r1 − x_r2)
    current-to-best1  x + F(x_best − x) + F(x_r1 − x_r2)

Crossovers:
    bin  — each component from the mutant with probability Cr, plus one forced index
    exp  — one contiguous circular block from the mutant, geometric length

Usage:
    from src.core import Domain, derive_substream
    from src.objectives import Objective
    from src.de_engine import DeConfig, run_de

    config = DeConfig(pop_size=5, scale_factor=0.05, crossover_rate=0.05,
                      mutation="rand1", crossover="bin", strategy="saturation",
                      budget=30_000)
    domain = Domain.unit(30)
    record = run_de(config, domain, Objective.from_name("f0", domain),
                    derive_substream(42, 0, 0))
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.boundary import PENALTY_FITNESS, Strategy, correct
from src.core import Domain, Individual, Population, RngStream, contains, sample_uniform
from src.errors import ConfigurationError, DimensionError
from src.objectives import BudgetMeter, Objective

logger = logging.getLogger(__name__)

F_MAX = 2.0


class Mutation(str, Enum):
    RAND1 = "rand1"
    RAND2 = "rand2"
    BEST1 = "best1"
    CURRENT_TO_BEST1 = "current-to-best1"


class Crossover(str, Enum):
    BIN = "bin"
    EXP = "exp"


class CorrectionPoint(str, Enum):
    OFFSPRING = "offspring"
    MUTANT = "mutant"


DONORS_REQUIRED = {
    Mutation.RAND1: 3,
    Mutation.RAND2: 5,
    Mutation.BEST1: 2,
    Mutation.CURRENT_TO_BEST1: 2,
}


def _parse(enum_cls, value, what: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value).lower())
    except ValueError:
        names = tuple(e.value for e in enum_cls)
        raise ConfigurationError(f"{what} must be one of {names}, got '{value}'") from None


# ── Configuration and results ─────────────────────────────────────────────────

def parameter_problems(
    pop_size: int,
    scale_factor: float,
    crossover_rate: float,
    mutation: Mutation,
    budget: int,
) -> list[str]:
    """Every engine precondition the parameters violate, as readable messages."""
    found = []
    if not 0.0 < scale_factor <= F_MAX:
        found.append(f"F must lie in (0, {F_MAX:g}], got {scale_factor:g}")
    if not 0.0 <= crossover_rate <= 1.0:
        found.append(f"Cr must lie in [0, 1], got {crossover_rate:g}")
    required = DONORS_REQUIRED[mutation]
    if pop_size < required:
        found.append(f"{mutation.value} needs N ≥ {required}, got N={pop_size}")
    if budget < pop_size:
        found.append(f"budget {budget} cannot fit the initial population of {pop_size}")
    return found


@dataclass(frozen=True)
class DeConfig:
    """
    One cell of the sweep.

    Args:
        pop_size:        N, population size
        scale_factor:    F in (0, 2]
        crossover_rate:  Cr in [0, 1]
        mutation:        "rand1" | "rand2" | "best1" | "current-to-best1"
        crossover:       "bin" | "exp"
        strategy:        "saturation" | "toroidal" | "mirror" | "cotn" | "penalty"
        budget:          Total objective evaluations, initialisation included
    """

    pop_size: int
    scale_factor: float
    crossover_rate: float
    mutation: Mutation
    crossover: Crossover
    strategy: Strategy
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "mutation", _parse(Mutation, self.mutation, "mutation"))
        object.__setattr__(self, "crossover", _parse(Crossover, self.crossover, "crossover"))
        object.__setattr__(self, "strategy", _parse(Strategy, self.strategy, "strategy"))
        object.__setattr__(self, "scale_factor", float(self.scale_factor))
        object.__setattr__(self, "crossover_rate", float(self.crossover_rate))

        problems = self.problems()
        if problems:
            raise ConfigurationError(f"invalid configuration {self.label}: " + "; ".join(problems))

    def problems(self) -> list[str]:
        return parameter_problems(
            self.pop_size, self.scale_factor, self.crossover_rate, self.mutation, self.budget
        )

    @property
    def label(self) -> str:
        return (
            f"{self.mutation.value}/{self.crossover.value}/{self.strategy.value} "
            f"N={self.pop_size} F={self.scale_factor:g} Cr={self.crossover_rate:g}"
        )


@dataclass(frozen=True)
class RunRecord:
    seed: int
    infeasible_count: int
    evaluations_used: int
    pois: float
    best_fitness: float
    generations: int
    offspring_generated: int = 0
    mutant_infeasible_count: int = 0


# ── Mutation ──────────────────────────────────────────────────────────────────

def _donors(pop: Population, k: int, rng: RngStream) -> np.ndarray:
    if pop.size < k:
        raise ConfigurationError(f"mutation needs {k} distinct donors, population has {pop.size}")
    return rng.distinct_indices(pop.size, k)


def mutate_rand1(pop: Population, target_index: int, F: float, rng: RngStream) -> np.ndarray:
    r1, r2, r3 = _donors(pop, 3, rng)
    return pop[r1].coords + F * (pop[r2].coords - pop[r3].coords)


def mutate_rand2(pop: Population, target_index: int, F: float, rng: RngStream) -> np.ndarray:
    r1, r2, r3, r4, r5 = _donors(pop, 5, rng)
    return (
        pop[r1].coords
        + F * (pop[r2].coords - pop[r3].coords)
        + F * (pop[r4].coords - pop[r5].coords)
    )


def mutate_best1(pop: Population, target_index: int, F: float, rng: RngStream) -> np.ndarray:
    r1, r2 = _donors(pop, 2, rng)
    return pop.best.coords + F * (pop[r1].coords - pop[r2].coords)


def mutate_current_to_best1(pop: Population, target_index: int, F: float, rng: RngStream) -> np.ndarray:
    r1, r2 = _donors(pop, 2, rng)
    x = pop[target_index].coords
    return x + F * (pop.best.coords - x) + F * (pop[r1].coords - pop[r2].coords)


MUTATIONS = {
    Mutation.RAND1: mutate_rand1,
    Mutation.RAND2: mutate_rand2,
    Mutation.BEST1: mutate_best1,
    Mutation.CURRENT_TO_BEST1: mutate_current_to_best1,
}


# ── Crossover ─────────────────────────────────────────────────────────────────

def _pair(target, mutant) -> tuple[np.ndarray, np.ndarray]:
    target = np.asarray(target, dtype=float)
    mutant = np.asarray(mutant, dtype=float)
    if target.shape != mutant.shape or target.ndim != 1:
        raise DimensionError(f"target and mutant differ in shape: {target.shape} vs {mutant.shape}")
    return target, mutant


def crossover_bin(target, mutant, Cr: float, rng: RngStream) -> np.ndarray:
    """
    Binomial crossover. Component i comes from the mutant when U_i < Cr or
    i is the forced index, so at least one mutant component is inherited.
    U_i ~ U[0, 1), hence Cr = 1 takes every component and Cr = 0 only the
    forced one.
    """
    target, mutant = _pair(target, mutant)
    forced = rng.integer(len(target))
    mask = rng.random_vector(len(target)) < Cr
    mask[forced] = True
    return np.where(mask, mutant, target)


def crossover_exp(target, mutant, Cr: float, rng: RngStream) -> np.ndarray:
    """
    Exponential crossover. Copies a circular block from the mutant starting
    at a uniform index; after each copy the block grows while U < Cr and the
    index has not wrapped back to the start. P(L = k) = Cr^(k−1)(1 − Cr)
    for k < n and P(L = n) = Cr^(n−1).
    """
    target, mutant = _pair(target, mutant)
    n = len(target)
    offspring = target.copy()
    start = rng.integer(n)
    i = start
    while True:
        offspring[i] = mutant[i]
        i = (i + 1) % n
        if i == start or not rng.random() < Cr:
            break
    return offspring


CROSSOVERS = {
    Crossover.BIN: crossover_bin,
    Crossover.EXP: crossover_exp,
}


# ── Pipeline ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Offspring:
    coords: np.ndarray
    counted_infeasible: bool
    mutant_infeasible: bool
    penalised: bool


def generate_offspring(
    pop: Population,
    target_index: int,
    config: DeConfig,
    domain: Domain,
    rng: RngStream,
    correction_point: CorrectionPoint = CorrectionPoint.OFFSPRING,
) -> Offspring:
    """
    mutate → crossover → count + correct, for one target.

    With correction_point="offspring" the offspring is checked and corrected
    after crossover. With "mutant" the mutant is checked and corrected
    before crossover; the offspring of two feasible parents is feasible.
    Infeasibility is counted once per generated solution at the correction point.
    """
    mutant = MUTATIONS[config.mutation](pop, target_index, config.scale_factor, rng)
    mutant_infeasible = not contains(domain, mutant)
    cross = CROSSOVERS[config.crossover]
    target = pop[target_index].coords

    if correction_point is CorrectionPoint.MUTANT:
        outcome = correct(config.strategy, mutant, domain, rng)
        trial = cross(target, outcome.corrected, config.crossover_rate, rng)
        penalised = outcome.penalty_applied and not contains(domain, trial)
    else:
        trial = cross(target, mutant, config.crossover_rate, rng)
        outcome = correct(config.strategy, trial, domain, rng)
        trial = outcome.corrected
        penalised = outcome.penalty_applied

    return Offspring(
        coords=trial,
        counted_infeasible=outcome.was_infeasible,
        mutant_infeasible=mutant_infeasible,
        penalised=penalised,
    )


def run_de(
    config: DeConfig,
    domain: Domain,
    objective: Objective,
    rng: RngStream,
    correction_point: CorrectionPoint | str = CorrectionPoint.OFFSPRING,
    observer: Callable[[int, Population], None] | None = None,
) -> RunRecord:
    """
    Run DE until the next evaluation would exceed the budget.

    Initialisation spends N evaluations. Each generation builds offspring
    from the population as it stood at the start of the generation (x_best
    is fixed for the generation); an offspring replaces its target iff its
    fitness is ≤ the target's. If the budget runs out mid-generation the
    remaining targets carry over unchanged.

    observer, if given, is called as observer(generation, population) after
    initialisation (generation 0) and after every generation.

    Raises:
        ConfigurationError: objective domain does not match, or bad correction_point
        NumericError:       a generated point has non-finite coordinates
    """
    correction_point = _parse(CorrectionPoint, correction_point, "correction point")
    if objective.domain.n != domain.n:
        raise ConfigurationError(
            f"objective is defined on n={objective.domain.n}, domain has n={domain.n}"
        )

    meter = BudgetMeter(objective, config.budget)
    members = []
    for _ in range(config.pop_size):
        individual = sample_uniform(domain, rng)
        individual.assign_fitness(meter.evaluate(individual.coords, rng))
        members.append(individual)
    pop = Population(members)
    if observer is not None:
        observer(0, pop)

    infeasible = 0
    mutant_infeasible = 0
    offspring_count = 0
    generations = 0

    while not meter.exhausted:
        # offspring are built from pop; survivors go into a copy
        next_pop = Population(list(pop.members))
        for target_index in range(config.pop_size):
            if meter.exhausted:
                break
            child = generate_offspring(pop, target_index, config, domain, rng, correction_point)
            offspring_count += 1
            infeasible += child.counted_infeasible
            mutant_infeasible += child.mutant_infeasible

            fitness = meter.evaluate(child.coords, rng)
            if child.penalised:
                fitness = PENALTY_FITNESS
            if fitness <= pop[target_index].fitness:
                next_pop.replace(target_index, Individual(coords=child.coords, fitness=fitness))
        pop = next_pop
        generations += 1
        if observer is not None:
            observer(generations, pop)

    record = RunRecord(
        seed=rng.seed,
        infeasible_count=infeasible,
        evaluations_used=meter.used,
        pois=infeasible / config.budget,
        best_fitness=pop.best.fitness,
        generations=generations,
        offspring_generated=offspring_count,
        mutant_infeasible_count=mutant_infeasible,
    )
    logger.debug(
        "%s seed=%d: %d/%d infeasible (POIS %.6f), best %.6g after %d generations",
        config.label, rng.seed, infeasible, config.budget, record.pois,
        record.best_fitness, generations,
    )
    return record
