"""
src/core.py

Shared building blocks: the box domain, individuals, populations and the
seeded random stream every stochastic operation draws from.

Types:
    Domain      — closed hypercube ⨉[a_i, b_i]; the feasibility oracle
    Individual  — coordinate vector plus cached objective value
    Population  — ordered members with the index of the current best
    RngStream   — seeded PCG64 generator; substreams via derive_substream()
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


# ── Domain ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Domain:
    """
    Box-constrained feasible region. Bounds are closed: a_i ≤ x_i ≤ b_i.

    Args:
        lower: Lower bounds a_i
        upper: Upper bounds b_i
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(a) for a in self.lower)
        upper = tuple(float(b) for b in self.upper)
        if len(lower) == 0 or len(lower) != len(upper):
            raise ConfigurationError(
                f"lower and upper bounds need the same non-zero length, "
                f"got {len(lower)} and {len(upper)}"
            )
        for i, (a, b) in enumerate(zip(lower, upper)):
            if not (np.isfinite(a) and np.isfinite(b)):
                raise ConfigurationError(f"bounds must be finite, dimension {i} is [{a}, {b}]")
            if not a < b:
                raise ConfigurationError(f"need a_i < b_i, dimension {i} is [{a}, {b}]")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, n: int) -> "Domain":
        """The [0, 1]^n hypercube."""
        if n < 1:
            raise ConfigurationError(f"dimensionality must be ≥ 1, got {n}")
        return cls(lower=(0.0,) * n, upper=(1.0,) * n)

    @property
    def n(self) -> int:
        return len(self.lower)

    @cached_property
    def lower_array(self) -> np.ndarray:
        arr = np.array(self.lower, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def upper_array(self) -> np.ndarray:
        arr = np.array(self.upper, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def width_array(self) -> np.ndarray:
        arr = self.upper_array - self.lower_array
        arr.setflags(write=False)
        return arr

    def check_length(self, point: np.ndarray) -> np.ndarray:
        """Return point as a float vector, raising DimensionError on length mismatch."""
        point = np.asarray(point, dtype=float)
        if point.shape != (self.n,):
            raise DimensionError(f"expected a vector of length {self.n}, got shape {point.shape}")
        return point

    def __repr__(self):
        if all(a == 0.0 for a in self.lower) and all(b == 1.0 for b in self.upper):
            return f"Domain([0,1]^{self.n})"
        return f"Domain(n={self.n})"


def contains(domain: Domain, point) -> bool:
    """True iff every coordinate lies in its closed interval [a_i, b_i]."""
    point = domain.check_length(point)
    return bool(np.all((point >= domain.lower_array) & (point <= domain.upper_array)))


# ── Random streams ────────────────────────────────────────────────────────────

class RngStream:
    """
    A seeded PCG64 generator owned by exactly one run.

    The same seed yields the same draw sequence on every platform (PCG64 and
    SeedSequence are stream-stable across numpy releases).

    Args:
        seed: 64-bit integer seed; larger or negative values are reduced mod 2^64
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & SEED_MASK
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def random(self) -> float:
        """One draw from U[0, 1)."""
        return float(self._gen.random())

    def random_vector(self, size: int) -> np.ndarray:
        return self._gen.random(size)

    def uniform(self, low, high) -> np.ndarray:
        return self._gen.uniform(low, high)

    def integer(self, high: int) -> int:
        """One draw from uniform{0, ..., high-1}."""
        return int(self._gen.integers(high))

    def normal(self, scale: float) -> float:
        return float(self._gen.normal(0.0, scale))

    def distinct_indices(self, population_size: int, k: int) -> np.ndarray:
        """k mutually distinct indices drawn uniformly from range(population_size)."""
        return self._gen.choice(population_size, size=k, replace=False)

    def __repr__(self):
        return f"RngStream(seed={self.seed})"


def derive_substream(master: int, config_index: int, run_index: int) -> RngStream:
    """
    Derive the stream for one (config, run) pair.

    Mixing function: numpy's SeedSequence hash over the entropy words
    [master mod 2^64, config_index, run_index]; the first 64-bit word of its
    generated state becomes the run seed. The run seed alone reproduces the
    run (it is what RunRecord.seed stores).
    """
    if config_index < 0 or run_index < 0:
        raise ConfigurationError("config_index and run_index must be non-negative")
    sequence = np.random.SeedSequence([int(master) & SEED_MASK, int(config_index), int(run_index)])
    seed = int(sequence.generate_state(1, dtype=np.uint64)[0])
    return RngStream(seed)


# ── Individuals and populations ───────────────────────────────────────────────

@dataclass
class Individual:
    coords: np.ndarray
    fitness: float | None = None

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def assign_fitness(self, value: float):
        """Cache the objective value. A drawn value is never recomputed."""
        if self.fitness is not None:
            raise RuntimeError("fitness already assigned; objective values are cached, not recomputed")
        self.fitness = float(value)

    def __repr__(self):
        fit = "unevaluated" if self.fitness is None else f"{self.fitness:.6g}"
        return f"Individual(n={len(self.coords)}, fitness={fit})"


def sample_uniform(domain: Domain, rng: RngStream) -> Individual:
    """Draw every coordinate independently and uniformly from [a_i, b_i]."""
    return Individual(coords=rng.uniform(domain.lower_array, domain.upper_array))


class Population:
    """
    Ordered list of evaluated individuals with the index of the fittest one.
    Ties on fitness go to the lowest index.
    """

    def __init__(self, members: list[Individual]):
        if not members:
            raise ConfigurationError("a population needs at least one member")
        if any(not m.evaluated for m in members):
            raise ValueError("every population member must be evaluated")
        self.members = list(members)
        self.best_index = self._scan_best()

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def best(self) -> Individual:
        return self.members[self.best_index]

    def __getitem__(self, index: int) -> Individual:
        return self.members[index]

    def __len__(self) -> int:
        return len(self.members)

    def replace(self, index: int, individual: Individual):
        """Put individual at slot index and keep best_index current."""
        if not individual.evaluated:
            raise ValueError("only evaluated individuals can join the population")
        previous = self.members[index]
        self.members[index] = individual
        best_fit = self.members[self.best_index].fitness
        if index == self.best_index:
            if individual.fitness > previous.fitness:
                self.best_index = self._scan_best()
        elif individual.fitness < best_fit or (individual.fitness == best_fit and index < self.best_index):
            self.best_index = index

    def _scan_best(self) -> int:
        best = 0
        for i, member in enumerate(self.members):
            if member.fitness < self.members[best].fitness:
                best = i
        return best

    def fitness_values(self) -> np.ndarray:
        return np.array([m.fitness for m in self.members], dtype=float)
