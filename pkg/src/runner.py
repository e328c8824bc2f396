"""
src/runner.py

Experiment runner: expands a parameter grid into configurations, runs every
(config, run) pair with its own derived random stream, and persists the
results as CSV.

Usage:
    from src.runner import default_grid, execute, load

    grid = default_grid()
    table = execute(grid, parallelism=8, out_path="results.csv")

An interrupted sweep is resumed by calling execute() again with the same
out_path: completed (config_id, run_index) pairs are read back and skipped.
Results do not depend on the parallelism level.
"""

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from itertools import product
from pathlib import Path

from src.boundary import Strategy
from src.core import Domain, derive_substream
from src.de_engine import F_MAX, Crossover, DeConfig, Mutation, parameter_problems, run_de
from src.errors import ConfigurationError, NumericError, ResultsParseError
from src.objectives import Objective, ObjectiveKind

logger = logging.getLogger(__name__)

DEFAULT_POP_SIZES = (5, 20, 100)
DEFAULT_CR_VALUES = (0.05, 0.285, 0.52, 0.755, 0.99)
DEFAULT_F_VALUES = (0.05, 0.266, 0.483, 0.7, 0.916, 1.133, 1.350, 1.566, 1.783, 2.0)
DEFAULT_DIMENSIONALITY = 30
DEFAULT_BUDGET_PER_DIMENSION = 10_000
DEFAULT_RUNS_PER_CONFIG = 50
DEFAULT_MASTER_SEED = 20_200_202

RESULTS_HEADER = (
    "config_id", "mutation", "crossover", "strategy", "N", "F", "Cr",
    "run_index", "seed", "pois", "best_fitness", "evaluations_used",
)
FAILURES_HEADER = ("config_id", "run_index", "message")
FAILURES_SUFFIX = ".failures.csv"

PROGRESS_EVERY = 500


# ── Grid ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GridSpec:
    pop_sizes: tuple[int, ...] = DEFAULT_POP_SIZES
    cr_values: tuple[float, ...] = DEFAULT_CR_VALUES
    f_values: tuple[float, ...] = DEFAULT_F_VALUES
    mutations: tuple[Mutation, ...] = tuple(Mutation)
    crossovers: tuple[Crossover, ...] = tuple(Crossover)
    strategies: tuple[Strategy, ...] = tuple(Strategy)
    dimensionality: int = DEFAULT_DIMENSIONALITY
    budget_per_dimension: int = DEFAULT_BUDGET_PER_DIMENSION
    runs_per_config: int = DEFAULT_RUNS_PER_CONFIG
    master_seed: int = DEFAULT_MASTER_SEED
    objective: ObjectiveKind = ObjectiveKind.F0

    def __post_init__(self):
        convert = {
            "pop_sizes": int,
            "cr_values": float,
            "f_values": float,
            "mutations": lambda v: _enum(Mutation, v, "mutation"),
            "crossovers": lambda v: _enum(Crossover, v, "crossover"),
            "strategies": lambda v: _enum(Strategy, v, "strategy"),
        }
        for name, conv in convert.items():
            values = getattr(self, name)
            if isinstance(values, (str, int, float)):
                values = (values,)
            values = tuple(conv(v) for v in values)
            if not values:
                raise ConfigurationError(f"grid field '{name}' must not be empty")
            object.__setattr__(self, name, values)
        object.__setattr__(self, "objective", _enum(ObjectiveKind, self.objective, "objective"))
        for name in ("dimensionality", "budget_per_dimension", "runs_per_config"):
            value = int(getattr(self, name))
            if value < 1:
                raise ConfigurationError(f"grid field '{name}' must be ≥ 1, got {value}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "master_seed", int(self.master_seed))

    @property
    def budget(self) -> int:
        return self.budget_per_dimension * self.dimensionality

    @property
    def total_configs(self) -> int:
        return (
            len(self.pop_sizes) * len(self.cr_values) * len(self.f_values)
            * len(self.mutations) * len(self.crossovers) * len(self.strategies)
        )


def _enum(enum_cls, value, what: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value).lower())
    except ValueError:
        names = tuple(e.value for e in enum_cls)
        raise ConfigurationError(f"{what} must be one of {names}, got '{value}'") from None


def default_grid() -> GridSpec:
    """The full sweep: 5 Cr × 10 F × 3 N × 2 crossovers × 4 mutations × 5 strategies."""
    return GridSpec()


GRID_KEYS = tuple(f.name for f in fields(GridSpec))


def grid_from_dict(doc: dict) -> GridSpec:
    """Build a GridSpec from a JSON document; absent keys keep their defaults."""
    if not isinstance(doc, dict) or not doc:
        raise ConfigurationError("grid document is empty; expected an object with GridSpec fields")
    unknown = sorted(set(doc) - set(GRID_KEYS))
    if unknown:
        raise ConfigurationError(f"unknown grid key(s) {unknown}; allowed: {list(GRID_KEYS)}")
    return GridSpec(**doc)


def grid_to_dict(grid: GridSpec) -> dict:
    doc = {}
    for name in GRID_KEYS:
        value = getattr(grid, name)
        if isinstance(value, tuple):
            value = [v.value if hasattr(v, "value") else v for v in value]
        elif hasattr(value, "value"):
            value = value.value
        doc[name] = value
    return doc


def load_grid(path) -> GridSpec:
    text = Path(path).read_text()
    if not text.strip():
        raise ConfigurationError(f"grid file {path} is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"grid file {path} is not valid JSON: {exc}") from None
    return grid_from_dict(doc)


@dataclass(frozen=True)
class Rejection:
    mutation: str
    crossover: str
    strategy: str
    pop_size: int
    scale_factor: float
    crossover_rate: float
    reasons: tuple[str, ...]

    def __str__(self):
        return (
            f"{self.mutation}/{self.crossover}/{self.strategy} N={self.pop_size} "
            f"F={self.scale_factor:g} Cr={self.crossover_rate:g}: " + "; ".join(self.reasons)
        )


@dataclass(frozen=True)
class Expansion:
    configs: tuple[DeConfig, ...]
    rejected: tuple[Rejection, ...] = ()


def expand(grid: GridSpec) -> Expansion:
    """
    Expand the grid in lexicographic (strategy, mutation, crossover, N, F, Cr)
    order. config_id is the position in Expansion.configs. Combinations that
    violate engine preconditions are listed in Expansion.rejected.
    """
    configs = []
    rejected = []
    for strategy, mutation, crossover, n_pop, f, cr in product(
        grid.strategies, grid.mutations, grid.crossovers,
        grid.pop_sizes, grid.f_values, grid.cr_values,
    ):
        try:
            configs.append(DeConfig(
                pop_size=n_pop, scale_factor=f, crossover_rate=cr,
                mutation=mutation, crossover=crossover, strategy=strategy,
                budget=grid.budget,
            ))
        except ConfigurationError:
            reasons = parameter_problems(n_pop, float(f), float(cr), mutation, grid.budget)
            rejection = Rejection(
                mutation=mutation.value, crossover=crossover.value, strategy=strategy.value,
                pop_size=n_pop, scale_factor=f, crossover_rate=cr, reasons=tuple(reasons),
            )
            logger.warning("rejected configuration %s", rejection)
            rejected.append(rejection)
    return Expansion(configs=tuple(configs), rejected=tuple(rejected))


# ── Results ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ResultRow:
    config_id: int
    mutation: str
    crossover: str
    strategy: str
    pop_size: int
    scale_factor: float
    crossover_rate: float
    run_index: int
    seed: int
    pois: float | None
    best_fitness: float | None
    evaluations_used: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.pois is None

    @property
    def key(self) -> tuple[int, int]:
        return (self.config_id, self.run_index)

    @property
    def family(self) -> tuple[str, str, str, int]:
        return (self.mutation, self.crossover, self.strategy, self.pop_size)

    @property
    def label(self) -> str:
        return (
            f"{self.mutation}/{self.crossover}/{self.strategy} "
            f"N={self.pop_size} F={self.scale_factor:g} Cr={self.crossover_rate:g}"
        )

    @classmethod
    def for_config(cls, config_id: int, config: DeConfig, run_index: int, seed: int, **outcome) -> "ResultRow":
        return cls(
            config_id=config_id,
            mutation=config.mutation.value,
            crossover=config.crossover.value,
            strategy=config.strategy.value,
            pop_size=config.pop_size,
            scale_factor=config.scale_factor,
            crossover_rate=config.crossover_rate,
            run_index=run_index,
            seed=seed,
            **outcome,
        )

    def to_csv(self) -> list[str]:
        return [
            str(self.config_id), self.mutation, self.crossover, self.strategy,
            str(self.pop_size), _real(self.scale_factor), _real(self.crossover_rate),
            str(self.run_index), str(self.seed),
            "" if self.pois is None else _real(self.pois),
            "" if self.best_fitness is None else _real(self.best_fitness),
            str(self.evaluations_used),
        ]


def _real(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class ResultsTable:
    rows: list[ResultRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def sorted(self) -> "ResultsTable":
        return ResultsTable(rows=sorted(self.rows, key=lambda r: r.key))

    def keys(self) -> set[tuple[int, int]]:
        return {r.key for r in self.rows}

    def failures(self) -> list[ResultRow]:
        return [r for r in self.rows if r.failed]


def failures_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + FAILURES_SUFFIX)


def _csv_writer(handle):
    return csv.writer(handle, lineterminator="\n")


def persist(table: ResultsTable, path):
    """
    Write the table sorted by (config_id, run_index). Reals use 17
    significant digits. Failed rows leave pois and best_fitness empty and
    their diagnostics go to the <path>.failures.csv sidecar.
    """
    path = Path(path)
    rows = table.sorted().rows
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(RESULTS_HEADER)
        for row in rows:
            writer.writerow(row.to_csv())
    os.replace(tmp, path)

    sidecar = failures_path(path)
    failed = [r for r in rows if r.failed]
    if failed:
        with open(sidecar, "w", newline="") as handle:
            writer = _csv_writer(handle)
            writer.writerow(FAILURES_HEADER)
            for row in failed:
                writer.writerow([row.config_id, row.run_index, row.error or ""])
    elif sidecar.exists():
        sidecar.unlink()


def _parse_field(raw: str, column: str, line: int, conv, check=None, what: str = ""):
    try:
        value = conv(raw)
    except ValueError:
        raise ResultsParseError(f"cannot parse {raw!r} as {conv.__name__}", line, column) from None
    if check is not None and not check(value):
        raise ResultsParseError(f"value {raw} out of range ({what})", line, column)
    return value


def _parse_row(fields_: list[str], line: int) -> ResultRow:
    if len(fields_) != len(RESULTS_HEADER):
        raise ResultsParseError(
            f"expected {len(RESULTS_HEADER)} columns, found {len(fields_)}", line
        )
    raw = dict(zip(RESULTS_HEADER, fields_))

    def enum_field(column, enum_cls):
        value = raw[column]
        allowed = {e.value for e in enum_cls}
        if value not in allowed:
            raise ResultsParseError(f"unknown value {value!r}; allowed {sorted(allowed)}", line, column)
        return value

    failed = raw["pois"] == "" and raw["best_fitness"] == ""
    return ResultRow(
        config_id=_parse_field(raw["config_id"], "config_id", line, int, lambda v: v >= 0, "≥ 0"),
        mutation=enum_field("mutation", Mutation),
        crossover=enum_field("crossover", Crossover),
        strategy=enum_field("strategy", Strategy),
        pop_size=_parse_field(raw["N"], "N", line, int, lambda v: v >= 1, "≥ 1"),
        scale_factor=_parse_field(raw["F"], "F", line, float, lambda v: 0.0 < v <= F_MAX, "(0, 2]"),
        crossover_rate=_parse_field(raw["Cr"], "Cr", line, float, lambda v: 0.0 <= v <= 1.0, "[0, 1]"),
        run_index=_parse_field(raw["run_index"], "run_index", line, int, lambda v: v >= 0, "≥ 0"),
        seed=_parse_field(raw["seed"], "seed", line, int, lambda v: 0 <= v < 2**64, "64-bit"),
        pois=None if failed else _parse_field(raw["pois"], "pois", line, float, lambda v: 0.0 <= v <= 1.0, "[0, 1]"),
        best_fitness=None if failed else _parse_field(raw["best_fitness"], "best_fitness", line, float),
        evaluations_used=_parse_field(raw["evaluations_used"], "evaluations_used", line, int, lambda v: v >= 0, "≥ 0"),
    )


def load(path, allow_truncated_tail: bool = False) -> ResultsTable:
    """
    Read a results CSV written by persist() or by an interrupted sweep.

    Args:
        path:                 Results file
        allow_truncated_tail: Drop a last line that lacks its newline (a
                              write cut short by an interruption)

    Raises:
        ResultsParseError: naming the line and column of the first problem
    """
    path = Path(path)
    text = path.read_text()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    elif allow_truncated_tail and lines:
        logger.warning("dropping unterminated last line %d of %s", len(lines), path)
        lines.pop()
        if not lines:
            return ResultsTable()
    if not lines:
        raise ResultsParseError("file is empty; expected a header row", 1)

    header = next(csv.reader([lines[0]]), [])
    if tuple(header) != RESULTS_HEADER:
        raise ResultsParseError(f"header must be {','.join(RESULTS_HEADER)}", 1)

    errors = _load_failures(path)
    rows = []
    seen = set()
    for number, text_line in enumerate(lines[1:], start=2):
        row = _parse_row(next(csv.reader([text_line]), []), number)
        if row.key in seen:
            raise ResultsParseError(f"duplicate (config_id, run_index) {row.key}", number)
        seen.add(row.key)
        if row.failed:
            row = replace(row, error=errors.get(row.key, ""))
        rows.append(row)
    return ResultsTable(rows=rows)


def _load_failures(path: Path) -> dict[tuple[int, int], str]:
    sidecar = failures_path(path)
    if not sidecar.exists():
        return {}
    errors = {}
    with open(sidecar, newline="") as handle:
        reader = csv.reader(handle)
        next(reader, None)
        for number, record in enumerate(reader, start=2):
            if len(record) != len(FAILURES_HEADER):
                raise ResultsParseError(
                    f"{sidecar.name}: expected {len(FAILURES_HEADER)} columns, found {len(record)}", number
                )
            try:
                key = (int(record[0]), int(record[1]))
            except ValueError:
                raise ResultsParseError(
                    f"{sidecar.name}: config_id and run_index must be integers, got {record[:2]}", number
                ) from None
            errors[key] = record[2]
    return errors


# ── Execution ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RunTask:
    config_id: int
    config: DeConfig
    run_index: int
    master_seed: int
    dimensionality: int
    objective: ObjectiveKind

    @property
    def key(self) -> tuple[int, int]:
        return (self.config_id, self.run_index)


def run_task(task: RunTask) -> ResultRow:
    """Run one (config, run) pair. A NumericError becomes a failed row."""
    rng = derive_substream(task.master_seed, task.config_id, task.run_index)
    domain = Domain.unit(task.dimensionality)
    objective = Objective(kind=task.objective, domain=domain)
    try:
        record = run_de(task.config, domain, objective, rng)
    except NumericError as exc:
        logger.error("run %s of %s failed: %s", task.run_index, task.config.label, exc)
        return ResultRow.for_config(
            task.config_id, task.config, task.run_index, rng.seed,
            pois=None, best_fitness=None, evaluations_used=0, error=str(exc),
        )
    return ResultRow.for_config(
        task.config_id, task.config, task.run_index, record.seed,
        pois=record.pois, best_fitness=record.best_fitness,
        evaluations_used=record.evaluations_used,
    )


class _ResultsSink:
    """Appends rows to the results file (and failures sidecar) as they finish."""

    def __init__(self, path: Path | None):
        self.path = path
        self._handle = None
        self._failures = None

    def __enter__(self):
        if self.path is not None:
            self._handle = open(self.path, "a", newline="")
        return self

    def write(self, row: ResultRow):
        if self._handle is None:
            return
        _csv_writer(self._handle).writerow(row.to_csv())
        self._handle.flush()
        if row.failed:
            sidecar = failures_path(self.path)
            new = not sidecar.exists()
            with open(sidecar, "a", newline="") as handle:
                writer = _csv_writer(handle)
                if new:
                    writer.writerow(FAILURES_HEADER)
                writer.writerow([row.config_id, row.run_index, row.error or ""])

    def __exit__(self, *exc):
        if self._handle is not None:
            self._handle.close()


def plan(grid: GridSpec, expansion: Expansion | None = None) -> list[RunTask]:
    """Every (config, run) pair of the grid, in (config_id, run_index) order."""
    expansion = expansion or expand(grid)
    return [
        RunTask(
            config_id=config_id, config=config, run_index=run_index,
            master_seed=grid.master_seed, dimensionality=grid.dimensionality,
            objective=grid.objective,
        )
        for config_id, config in enumerate(expansion.configs)
        for run_index in range(grid.runs_per_config)
    ]


def _resume(tasks: list[RunTask], out_path: Path) -> list[ResultRow]:
    if not out_path.exists() or out_path.stat().st_size == 0:
        return []
    previous = load(out_path, allow_truncated_tail=True)
    by_key = {t.key: t for t in tasks}
    kept = []
    for row in previous.rows:
        task = by_key.get(row.key)
        expected_seed = derive_substream(task.master_seed, *task.key).seed if task else None
        if task is None or row.label != task.config.label or row.seed != expected_seed:
            raise ConfigurationError(
                f"{out_path} holds results from a different grid "
                f"(config_id={row.config_id}, run_index={row.run_index}); "
                "use a new output path"
            )
        kept.append(row)
    return kept


def execute(grid: GridSpec, parallelism: int = 1, out_path=None) -> ResultsTable:
    """
    Run every (config, run) pair of the grid.

    Args:
        grid:        The sweep to run
        parallelism: Worker processes; 1 runs in-process
        out_path:    Results CSV. Rows are appended as they finish and the
                     file is rewritten sorted at the end. If it already holds
                     rows of this grid, those pairs are skipped.

    Returns:
        ResultsTable sorted by (config_id, run_index)
    """
    if parallelism < 1:
        raise ConfigurationError(f"parallelism must be ≥ 1, got {parallelism}")
    expansion = expand(grid)
    tasks = plan(grid, expansion)
    out_path = Path(out_path) if out_path is not None else None

    completed: list[ResultRow] = []
    if out_path is not None:
        completed = _resume(tasks, out_path)
        # rewrite cleanly so appends never follow a truncated line
        persist(ResultsTable(rows=completed), out_path)
    done = {r.key for r in completed}
    pending = [t for t in tasks if t.key not in done]

    logger.info(
        "sweep: %d configs (%d rejected) × %d runs; %d already done, %d to run, parallelism %d",
        len(expansion.configs), len(expansion.rejected), grid.runs_per_config,
        len(done), len(pending), parallelism,
    )

    new_rows: list[ResultRow] = []
    with _ResultsSink(out_path) as sink:
        if parallelism == 1:
            results = map(run_task, pending)
            new_rows = _drain(results, sink, len(pending))
        else:
            chunksize = max(1, len(pending) // (parallelism * 16))
            with ProcessPoolExecutor(max_workers=parallelism) as pool:
                results = pool.map(run_task, pending, chunksize=chunksize)
                new_rows = _drain(results, sink, len(pending))

    table = ResultsTable(rows=completed + new_rows).sorted()
    if out_path is not None:
        persist(table, out_path)
    failed = len(table.failures())
    if failed:
        logger.warning("%d run(s) failed; see %s", failed, failures_path(out_path) if out_path else "log")
    return table


def _drain(results, sink: _ResultsSink, total: int) -> list[ResultRow]:
    rows = []
    for count, row in enumerate(results, start=1):
        sink.write(row)
        rows.append(row)
        if count % PROGRESS_EVERY == 0 or count == total:
            logger.info("completed %d/%d runs", count, total)
    return rows
