"""
checks/c01_core/test_rng_and_population.py

CHECK: Random streams are reproducible and independent per (config, run);
       the population always knows its best member.

WHAT IS CHECKED:
    1. derive_substream() is deterministic and separates neighbouring pairs
    2. The run seed alone replays a stream
    3. Population.best_index is the minimal fitness, lowest index on ties,
       and stays correct after replacements
    4. Fitness is assigned once and never recomputed

RUN:
    pytest checks/c01_core/test_rng_and_population.py -v
"""

import numpy as np
import pytest

from src.core import Individual, Population, RngStream, derive_substream
from src.errors import ConfigurationError

pytestmark = pytest.mark.core


def _draws(stream: RngStream, k: int = 10) -> list[float]:
    return [stream.random() for _ in range(k)]


def _member(fitness: float, value: float = 0.5) -> Individual:
    return Individual(coords=np.array([value, value]), fitness=fitness)


class TestSubstreams:

    def test_same_triple_same_stream(self):
        """(42, 0, 0) twice gives identical draw sequences."""
        assert _draws(derive_substream(42, 0, 0)) == _draws(derive_substream(42, 0, 0))

    def test_neighbouring_runs_differ(self):
        """(42, 0, 0) vs (42, 0, 1) differ in the first 10 draws."""
        assert _draws(derive_substream(42, 0, 0)) != _draws(derive_substream(42, 0, 1))

    def test_swapped_indices_differ(self):
        """(42, 1, 0) vs (42, 0, 1): the mixing is not symmetric."""
        assert _draws(derive_substream(42, 1, 0)) != _draws(derive_substream(42, 0, 1))

    def test_no_seed_collisions_on_a_sweep_sized_block(self):
        """Every pair of a 200 × 50 block gets its own run seed."""
        seeds = {derive_substream(7, c, r).seed for c in range(200) for r in range(50)}
        assert len(seeds) == 200 * 50

    def test_run_seed_replays_the_stream(self):
        """RngStream(derived.seed) reproduces the derived stream exactly."""
        derived = derive_substream(20_200_202, 17, 3)
        assert _draws(RngStream(derived.seed), 50) == _draws(derive_substream(20_200_202, 17, 3), 50)

    def test_seed_reduced_to_64_bits(self):
        assert RngStream(-1).seed == 2**64 - 1
        assert RngStream(2**64 + 5).seed == 5

    def test_negative_indices_rejected(self):
        with pytest.raises(ConfigurationError):
            derive_substream(1, -1, 0)

    def test_distinct_indices_are_distinct(self):
        rng = RngStream(11)
        for _ in range(1_000):
            idx = rng.distinct_indices(5, 5)
            assert sorted(idx.tolist()) == [0, 1, 2, 3, 4]


class TestPopulation:

    def test_best_is_minimal_fitness(self):
        pop = Population([_member(0.7), _member(0.2), _member(0.9)])
        assert pop.best_index == 1
        assert pop.best.fitness == 0.2

    def test_ties_go_to_lowest_index(self):
        pop = Population([_member(0.4), _member(0.1), _member(0.1)])
        assert pop.best_index == 1

    def test_replacement_keeps_best_current(self):
        """After every replacement, best_index agrees with a full scan."""
        rng = np.random.default_rng(3)
        pop = Population([_member(f) for f in rng.random(8)])
        for _ in range(500):
            slot = int(rng.integers(8))
            pop.replace(slot, _member(float(rng.random())))
            scanned = int(np.argmin(pop.fitness_values()))
            assert pop.best_index == scanned

    def test_worsening_the_best_rescans(self):
        pop = Population([_member(0.3), _member(0.1), _member(0.2)])
        pop.replace(1, _member(0.9))
        assert pop.best_index == 2

    def test_unevaluated_members_rejected(self):
        with pytest.raises(ValueError):
            Population([Individual(coords=np.zeros(2))])

    def test_empty_population_rejected(self):
        with pytest.raises(ConfigurationError):
            Population([])


class TestIndividual:

    def test_fitness_assigned_once(self):
        """A drawn objective value is cached; a second assignment is an error."""
        individual = Individual(coords=np.zeros(3))
        individual.assign_fitness(0.25)
        assert individual.fitness == 0.25
        with pytest.raises(RuntimeError):
            individual.assign_fitness(0.5)
