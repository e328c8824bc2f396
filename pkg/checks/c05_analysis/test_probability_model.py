"""
checks/c05_analysis/test_probability_model.py

CHECK: The chance that a solution is infeasible in at least one of n
       dimensions, its inverse p_max, and the Monte Carlo oracle agree.

WHAT IS CHECKED:
    1. p_max(0.01, 500) ≈ 0.0000201 to 3 significant figures
    2. prob_infeasible and p_max invert each other within 1e-12 relative
    3. Monotonicity of the closed form and of the tabulated surface
    4. Monte Carlo estimates within 3 standard errors of the closed form
    5. Range errors

RUN:
    pytest checks/c05_analysis/test_probability_model.py -v
"""

import math

import numpy as np
import pytest

from src.analysis import monte_carlo_infeasibility, p_max, prob_infeasible, tabulate_pmax
from src.core import RngStream
from src.errors import ArgumentError

pytestmark = pytest.mark.analysis

T_GRID = (0.0, 0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9)
N_GRID = (1, 10, 30, 100, 500)


class TestClosedForm:

    def test_zero_p(self):
        for n in (1, 30, 500):
            assert prob_infeasible(0.0, n) == 0.0

    def test_one_dimension_is_identity(self):
        for p in (0.0, 1e-9, 0.3, 0.999):
            assert prob_infeasible(p, 1) == pytest.approx(p, rel=1e-14)

    def test_certain_infeasibility(self):
        assert prob_infeasible(1.0, 30) == 1.0

    def test_small_p_in_many_dimensions(self):
        """p = 0.0000201, n = 500: about 1% of solutions infeasible."""
        assert prob_infeasible(0.0000201, 500) == pytest.approx(0.01, rel=0.01)

    def test_small_p_precision(self):
        """For tiny p the result stays close to n·p instead of cancelling to zero."""
        assert prob_infeasible(1e-18, 30) == pytest.approx(30e-18, rel=1e-9)

    def test_pmax_headline_value(self):
        """p_max(0.01, 500) = 1 − 0.99^(1/500) = 2.01e-5 to 3 significant figures."""
        value = p_max(0.01, 500)

        print(f"\n[CHECK] p_max(0.01, 500) = {value:.6e}")

        assert f"{value:.3g}" == "2.01e-05"
        assert value == pytest.approx(1 - 0.99 ** (1 / 500), rel=1e-10)

    def test_pmax_zero_threshold(self):
        for n in N_GRID:
            assert p_max(0.0, n) == 0.0

    @pytest.mark.parametrize("t", [0.01, 0.1, 0.5])
    @pytest.mark.parametrize("n", [1, 30, 500])
    def test_round_trip(self, t, n):
        """prob_infeasible(p_max(t, n), n) = t and p_max(prob_infeasible(p, n), n) = p."""
        p = p_max(t, n)
        assert math.isclose(prob_infeasible(p, n), t, rel_tol=1e-12)
        assert math.isclose(p_max(prob_infeasible(p, n), n), p, rel_tol=1e-12)

    def test_strictly_increasing(self):
        ps = np.linspace(0.001, 0.999, 50)
        for n in (1, 2, 30):
            values = [prob_infeasible(p, n) for p in ps]
            assert all(a < b for a, b in zip(values, values[1:]))
        for p in (0.01, 0.5):
            values = [prob_infeasible(p, n) for n in range(1, 40)]
            assert all(a < b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("call", [
        lambda: prob_infeasible(-0.1, 3),
        lambda: prob_infeasible(1.1, 3),
        lambda: prob_infeasible(0.5, 0),
        lambda: p_max(1.0, 3),
        lambda: p_max(-0.01, 3),
        lambda: p_max(0.5, 2.5),
    ])
    def test_range_errors(self, call):
        with pytest.raises(ArgumentError):
            call()


class TestTabulate:

    def test_headline_cell(self):
        table = tabulate_pmax([0.01], [500])
        assert f"{table.values[0, 0]:.3g}" == "2.01e-05"

    def test_surface_monotonicity(self):
        """Non-increasing in n (down a column), non-decreasing in t (along a row)."""
        table = tabulate_pmax(T_GRID, N_GRID)
        assert table.values.shape == (len(N_GRID), len(T_GRID))
        assert np.all(np.diff(table.values, axis=0) <= 0)
        assert np.all(np.diff(table.values, axis=1) >= 0)
        assert np.all(table.values[:, 0] == 0.0)

    def test_rows_for_csv(self):
        rows = tabulate_pmax([0.0, 0.5], [1, 2]).rows()
        assert rows[0] == ["n", "0", "0.5"]
        assert rows[1][:2] == ["1", "0"]
        assert float(rows[1][2]) == pytest.approx(0.5, rel=1e-13)
        assert rows[2][0] == "2"
        assert float(rows[2][2]) == pytest.approx(1 - math.sqrt(0.5), rel=1e-13)

    def test_empty_grid_rejected(self):
        with pytest.raises(ArgumentError):
            tabulate_pmax([], [1])


class TestMonteCarlo:

    @pytest.mark.parametrize("p,n", [(0.1, 10), (0.001, 30), (0.0000201, 500)])
    def test_within_three_standard_errors(self, p, n):
        trials = 100_000
        f = prob_infeasible(p, n)
        estimate = monte_carlo_infeasibility(p, n, trials, RngStream(int(p * 1e7) + n))
        bound = 3 * math.sqrt(f * (1 - f) / trials)

        print(f"\n[CHECK] MC p={p} n={n}: {estimate:.5f} vs {f:.5f} (±{bound:.5f})")

        assert abs(estimate - f) < bound

    def test_degenerate_probabilities(self):
        assert monte_carlo_infeasibility(0.0, 30, 1_000, RngStream(1)) == 0.0
        assert monte_carlo_infeasibility(1.0, 30, 1_000, RngStream(1)) == 1.0

    def test_agreement_over_many_seeds(self):
        """Across 1000 seeds at least 99% land within 3 standard errors."""
        p, n, trials = 0.02, 20, 2_000
        f = prob_infeasible(p, n)
        bound = 3 * math.sqrt(f * (1 - f) / trials)
        inside = sum(
            abs(monte_carlo_infeasibility(p, n, trials, RngStream(seed)) - f) < bound
            for seed in range(1_000)
        )
        assert inside >= 990

    def test_trials_must_be_positive(self):
        with pytest.raises(ArgumentError):
            monte_carlo_infeasibility(0.1, 3, 0, RngStream(0))
