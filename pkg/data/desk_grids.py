"""
data/desk_grids.py

Scaled-down sweeps that finish on a laptop. The full sweep (6000 configs ×
50 runs × 3·10⁵ evaluations) is only reachable through default_grid() and
hours of CPU; these grids keep n=30 and the 10⁴-per-dimension ratio down
to 10³, so each run spends 3·10⁴ evaluations.
"""

from src.runner import DEFAULT_CR_VALUES, DEFAULT_F_VALUES, DEFAULT_POP_SIZES, GridSpec

DESK_N = 30
DESK_BUDGET_PER_DIM = 1_000
DESK_RUNS = 15
DESK_SEED = 424_242


def _single(**overrides) -> GridSpec:
    base = dict(
        dimensionality=DESK_N,
        budget_per_dimension=DESK_BUDGET_PER_DIM,
        runs_per_config=DESK_RUNS,
        master_seed=DESK_SEED,
    )
    base.update(overrides)
    return GridSpec(**base)


def minimal_parameters_grid() -> GridSpec:
    """N=5, F=0.05, Cr=0.05, rand1/bin/saturation: the no-infeasibility floor."""
    return _single(
        pop_sizes=(5,), f_values=(0.05,), cr_values=(0.05,),
        mutations=("rand1",), crossovers=("bin",), strategies=("saturation",),
    )


def aggressive_saturation_grid() -> GridSpec:
    """N=100, F=1.566, Cr=0.99, rand1/bin/saturation: almost every offspring infeasible."""
    return _single(
        pop_sizes=(100,), f_values=(1.566,), cr_values=(0.99,),
        mutations=("rand1",), crossovers=("bin",), strategies=("saturation",),
    )


def f_trend_grid() -> GridSpec:
    """N=20, Cr=0.52, rand1/bin/toroidal over the full 10-point F axis."""
    return _single(
        pop_sizes=(20,), f_values=DEFAULT_F_VALUES, cr_values=(0.52,),
        mutations=("rand1",), crossovers=("bin",), strategies=("toroidal",),
    )


def pop_size_grid() -> GridSpec:
    """F=0.483, Cr=0.52, rand1/bin/saturation at N = 5, 20 and 100."""
    return _single(
        pop_sizes=DEFAULT_POP_SIZES, f_values=(0.483,), cr_values=(0.52,),
        mutations=("rand1",), crossovers=("bin",), strategies=("saturation",),
    )


def cr_trend_grid() -> GridSpec:
    """N=20, F=0.483, rand1/bin/saturation over the full 5-point Cr axis."""
    return _single(
        pop_sizes=(20,), f_values=(0.483,), cr_values=DEFAULT_CR_VALUES,
        mutations=("rand1",), crossovers=("bin",), strategies=("saturation",),
    )


def exp_vs_bin_grid() -> GridSpec:
    """N=5, F=0.7, rand1/toroidal, both crossovers at three interior Cr values."""
    return _single(
        pop_sizes=(5,), f_values=(0.7,), cr_values=(0.285, 0.52, 0.755),
        mutations=("rand1",), crossovers=("bin", "exp"), strategies=("toroidal",),
    )


def determinism_grid() -> GridSpec:
    """20 configs, small n and budget: for parallelism and resume comparisons."""
    return GridSpec(
        pop_sizes=(5,),
        f_values=(0.266, 1.566),
        cr_values=(0.52,),
        mutations=("rand1", "current-to-best1"),
        crossovers=("bin",),
        strategies=("saturation", "toroidal", "mirror", "cotn", "penalty"),
        dimensionality=10,
        budget_per_dimension=60,
        runs_per_config=3,
        master_seed=DESK_SEED,
    )
