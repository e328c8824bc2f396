"""
data/sample_results.py

Hand-built result rows for the analysis, persistence and rendering checks.
Nothing here comes from a DE run, so the expected classes and statistics
are known in advance.
"""

from src.runner import DEFAULT_CR_VALUES, DEFAULT_F_VALUES, ResultRow

FIXTURE_FAMILY = ("rand1", "exp", "cotn", 5)
FIXTURE_RUNS = 15
FIXTURE_BUDGET = 30_000

# Per-run POIS cycles; every value of a cycle lies in the bands of its class.
TEAL_CYCLE = (0.0, 0.0004, 0.001, 0.9995, 1.0)
ORANGE_CYCLE = (0.0, 0.002, 0.0075, 0.995, 0.999)
CLASS_ORDER = ("teal", "orange", "violet")

# 50 POIS values of one configuration, as a sweep would report them.
STATISTICS_FIXTURE = (
    0.01234, 0.00871, 0.02210, 0.01502, 0.00033, 0.03114, 0.01987, 0.00456,
    0.02640, 0.01118, 0.00912, 0.01776, 0.02389, 0.00021, 0.01450, 0.03301,
    0.00765, 0.01923, 0.02048, 0.01067, 0.00398, 0.02815, 0.01634, 0.00589,
    0.01291, 0.02177, 0.00944, 0.03058, 0.01362, 0.00710, 0.01845, 0.02503,
    0.00127, 0.01589, 0.02264, 0.00833, 0.01401, 0.02932, 0.01011, 0.00672,
    0.01718, 0.02096, 0.00265, 0.01556, 0.02441, 0.00987, 0.01170, 0.03207,
    0.00504, 0.01869,
)


def expected_class(f_index: int, cr_index: int) -> str:
    return CLASS_ORDER[(f_index + cr_index) % 3]


def _pois(cls: str, run_index: int) -> float:
    if cls == "teal":
        return TEAL_CYCLE[run_index % len(TEAL_CYCLE)]
    if cls == "orange":
        return ORANGE_CYCLE[run_index % len(ORANGE_CYCLE)]
    return round(0.2 + 0.04 * run_index, 6)


def lattice_rows(
    family=FIXTURE_FAMILY,
    f_values=DEFAULT_F_VALUES,
    cr_values=DEFAULT_CR_VALUES,
    runs: int = FIXTURE_RUNS,
    first_config_id: int = 0,
    skip: tuple[tuple[float, float], ...] = (),
) -> list[ResultRow]:
    """
    A complete (F, Cr) lattice for one family. Panel classes rotate
    teal → orange → violet along the anti-diagonals (see expected_class).
    Cells listed in skip are left out.
    """
    mutation, crossover, strategy, pop_size = family
    rows = []
    config_id = first_config_id
    for i_f, f in enumerate(f_values):
        for i_cr, cr in enumerate(cr_values):
            cls = expected_class(i_f, i_cr)
            if (f, cr) not in skip:
                for run in range(runs):
                    rows.append(ResultRow(
                        config_id=config_id, mutation=mutation, crossover=crossover,
                        strategy=strategy, pop_size=pop_size, scale_factor=f,
                        crossover_rate=cr, run_index=run, seed=1_000 * config_id + run,
                        pois=_pois(cls, run), best_fitness=0.001 * (run + 1),
                        evaluations_used=FIXTURE_BUDGET,
                    ))
            config_id += 1
    return rows


def series_rows(values, config_id: int = 0, family=FIXTURE_FAMILY, f: float = 0.7, cr: float = 0.52) -> list[ResultRow]:
    """One configuration whose run i reports values[i]."""
    mutation, crossover, strategy, pop_size = family
    return [
        ResultRow(
            config_id=config_id, mutation=mutation, crossover=crossover, strategy=strategy,
            pop_size=pop_size, scale_factor=f, crossover_rate=cr, run_index=run,
            seed=7_000 + run, pois=value, best_fitness=0.5, evaluations_used=FIXTURE_BUDGET,
        )
        for run, value in enumerate(values)
    ]


def three_row_fixture() -> list[ResultRow]:
    """Two successful rows and one failed row, with awkward reals."""
    ok = series_rows([0.1 + 0.2, 1.0 / 3.0], config_id=4, f=0.266, cr=0.285)
    failed = ResultRow(
        config_id=9, mutation="rand2", crossover="bin", strategy="mirror", pop_size=20,
        scale_factor=2.0, crossover_rate=0.99, run_index=0, seed=2**64 - 1,
        pois=None, best_fitness=None, evaluations_used=0,
        error="non-finite coordinate in generated point (mirror cannot repair it)",
    )
    return ok + [failed]
