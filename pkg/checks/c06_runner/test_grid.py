"""
checks/c06_runner/test_grid.py

CHECK: The sweep grid expands into a stable, fully enumerated list of
       configurations, and grid files are validated strictly.

WHAT IS CHECKED:
    1. Default grid: 6000 configs, budget 3·10^5, 5 Cr × 10 F values
    2. Expansion order (strategy, mutation, crossover, N, F, Cr)
    3. Invalid combinations are reported, never silently dropped
    4. JSON grid files: unknown keys, empty documents, round trip
    5. Desk-scale overrides of the default grid plan 6000 × 15 runs

RUN:
    pytest checks/c06_runner/test_grid.py -v
"""

import json
from dataclasses import replace

import pytest

from src.boundary import Strategy
from src.de_engine import Crossover, Mutation
from src.errors import ConfigurationError
from src.objectives import ObjectiveKind
from src.runner import (
    GridSpec,
    default_grid,
    expand,
    grid_from_dict,
    grid_to_dict,
    load_grid,
    plan,
)

pytestmark = pytest.mark.runner


def _tiny(**overrides) -> GridSpec:
    base = dict(
        pop_sizes=(5,), f_values=(0.5,), cr_values=(0.5,), mutations=("rand1",),
        crossovers=("bin",), strategies=("saturation",), dimensionality=4,
        budget_per_dimension=10, runs_per_config=2,
    )
    base.update(overrides)
    return GridSpec(**base)


class TestDefaultGrid:

    def test_sizes(self):
        grid = default_grid()
        assert len(grid.cr_values) == 5
        assert len(grid.f_values) == 10
        assert grid.pop_sizes == (5, 20, 100)
        assert grid.total_configs == 6000

    def test_budget_and_protocol(self):
        grid = default_grid()
        assert grid.dimensionality == 30
        assert grid.budget == 300_000
        assert grid.runs_per_config == 50
        assert grid.objective is ObjectiveKind.F0

    def test_f_axis(self):
        grid = default_grid()
        assert grid.f_values[0] == 0.05 and grid.f_values[-1] == 2.0
        assert list(grid.f_values) == sorted(grid.f_values)

    def test_expands_to_6000_without_rejections(self):
        expansion = expand(default_grid())
        assert len(expansion.configs) == 6000
        assert expansion.rejected == ()
        assert all(c.budget == 300_000 for c in expansion.configs)


class TestExpansionOrder:

    def test_singleton_grid(self):
        assert len(expand(_tiny()).configs) == 1

    def test_lexicographic_order(self):
        """config_id walks Cr fastest, then F, N, crossover, mutation, strategy."""
        grid = _tiny(
            pop_sizes=(5, 20), f_values=(0.3, 0.6), cr_values=(0.1, 0.9),
            mutations=("rand1", "best1"), crossovers=("bin", "exp"),
            strategies=("saturation", "mirror"),
        )
        configs = expand(grid).configs
        keys = [
            (list(Strategy).index(c.strategy), list(Mutation).index(c.mutation),
             list(Crossover).index(c.crossover), c.pop_size, c.scale_factor, c.crossover_rate)
            for c in configs
        ]
        assert len(configs) == 64
        assert configs[0].label == "rand1/bin/saturation N=5 F=0.3 Cr=0.1"
        assert configs[1].label == "rand1/bin/saturation N=5 F=0.3 Cr=0.9"
        assert configs[2].label == "rand1/bin/saturation N=5 F=0.6 Cr=0.1"
        assert configs[-1].label == "best1/exp/mirror N=20 F=0.6 Cr=0.9"
        assert keys == sorted(keys)

    def test_order_is_stable(self):
        grid = default_grid()
        assert [c.label for c in expand(grid).configs][:50] == [c.label for c in expand(grid).configs][:50]

    def test_strategy_is_the_slowest_key(self):
        configs = expand(default_grid()).configs
        assert {c.strategy for c in configs[:1200]} == {Strategy.SATURATION}
        assert {c.strategy for c in configs[-1200:]} == {Strategy.PENALTY}


class TestRejections:

    def test_rand2_with_small_population(self):
        """N=3 with rand2: no configs, one diagnostic naming the donor requirement."""
        expansion = expand(_tiny(pop_sizes=(3,), mutations=("rand2",)))
        assert expansion.configs == ()
        assert len(expansion.rejected) == 1
        assert "N ≥ 5" in str(expansion.rejected[0])

    def test_mixed_grid_keeps_valid_configs(self):
        expansion = expand(_tiny(pop_sizes=(3, 5), mutations=("rand1", "rand2"), f_values=(0.5, 2.5)))
        assert len(expansion.configs) == 3
        assert len(expansion.rejected) == 5
        assert any("F must lie in (0, 2]" in r for rej in expansion.rejected for r in rej.reasons)

    def test_budget_below_population(self):
        expansion = expand(_tiny(pop_sizes=(100,), dimensionality=2, budget_per_dimension=10))
        assert expansion.configs == ()
        assert "budget" in expansion.rejected[0].reasons[0]


class TestGridFiles:

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError, match="unknown grid key"):
            grid_from_dict({"pop_sizes": [5], "population": 5})

    def test_empty_document_rejected(self, tmp_path):
        path = tmp_path / "grid.json"
        path.write_text("")
        with pytest.raises(ConfigurationError):
            load_grid(path)
        path.write_text("{}")
        with pytest.raises(ConfigurationError):
            load_grid(path)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "grid.json"
        path.write_text("{pop_sizes: [5]")
        with pytest.raises(ConfigurationError, match="not valid JSON"):
            load_grid(path)

    def test_bad_values_rejected(self):
        with pytest.raises(ConfigurationError):
            grid_from_dict({"strategies": ["saturation", "dismiss"]})
        with pytest.raises(ConfigurationError):
            grid_from_dict({"cr_values": []})
        with pytest.raises(ConfigurationError):
            grid_from_dict({"runs_per_config": 0})

    def test_partial_document_keeps_defaults(self):
        grid = grid_from_dict({"pop_sizes": [20], "runs_per_config": 15})
        assert grid.pop_sizes == (20,)
        assert grid.runs_per_config == 15
        assert grid.f_values == default_grid().f_values

    def test_round_trip_through_json(self, tmp_path):
        path = tmp_path / "grid.json"
        path.write_text(json.dumps(grid_to_dict(default_grid())))
        assert load_grid(path) == default_grid()


class TestDeskScalePlan:

    def test_overrides_keep_every_config(self):
        """--n 10 --budget-per-dim 1000 --runs 15 on the default grid: 90 000 runs, none rejected."""
        grid = replace(default_grid(), dimensionality=10, budget_per_dimension=1_000, runs_per_config=15)
        tasks = plan(grid)

        print(f"\n[CHECK] {len(tasks)} planned runs at budget {grid.budget}")

        assert len(tasks) == 6000 * 15
        assert tasks[0].key == (0, 0)
        assert tasks[-1].key == (5999, 14)
        assert {t.dimensionality for t in tasks} == {10}
