"""
src/cli.py

Command-line entry point.

Usage:
    de-infeasibility run --pop-size 5 --f 0.05 --cr 0.05 --mutation rand1 \\
        --crossover bin --strategy saturation --n 30 --budget 30000 --seed 7
    de-infeasibility grid grid.json --parallelism 8 --out results.csv
    de-infeasibility analyze results.csv --strategy toroidal
    de-infeasibility plot results.csv --mutation rand1 --crossover exp \\
        --strategy cotn --pop-size 5 --out rand1_exp_cotn_5.svg
    de-infeasibility tabulate --t-grid 0,0.01,0.1,0.5 --n-grid 1,30,500 --out pmax.csv

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from src.analysis import edpois_from_table, summarize, tabulate_pmax
from src.boundary import Strategy
from src.core import Domain, RngStream
from src.de_engine import CorrectionPoint, Crossover, DeConfig, Mutation, run_de
from src.errors import EXIT_DATA, EXIT_OK, DeLabError, UsageError
from src.objectives import Objective, ObjectiveKind
from src.plotting import render_edpois_svg, render_pmax_svg, write_svg
from src.runner import (
    DEFAULT_BUDGET_PER_DIMENSION,
    DEFAULT_DIMENSIONALITY,
    default_grid,
    execute,
    expand,
    grid_to_dict,
    load,
    load_grid,
)

logger = logging.getLogger(__name__)

RUN_FIELDS = (
    "seed", "infeasible_count", "evaluations_used", "pois", "best_fitness",
    "generations", "offspring_generated", "mutant_infeasible_count",
)
ANALYZE_FIELDS = (
    "config_id", "mutation", "crossover", "strategy", "N", "F", "Cr",
    "runs", "complete", "class", "min", "max", "mean", "median", "std",
)
DEFAULT_T_GRID = (0.0, 0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9)
DEFAULT_N_GRID = (1, 10, 30, 100, 500)


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with code 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _choices(enum_cls) -> list[str]:
    return [e.value for e in enum_cls]


def _real(x: float) -> str:
    return f"{x:.17g}"


# ── run ───────────────────────────────────────────────────────────────────────

def cmd_run(args) -> int:
    domain = Domain.unit(args.n)
    budget = args.budget if args.budget is not None else DEFAULT_BUDGET_PER_DIMENSION * args.n
    config = DeConfig(
        pop_size=args.pop_size,
        scale_factor=args.f,
        crossover_rate=args.cr,
        mutation=args.mutation,
        crossover=args.crossover,
        strategy=args.strategy,
        budget=budget,
    )
    objective = Objective.from_name(args.objective, domain)
    record = run_de(config, domain, objective, RngStream(args.seed), correction_point=args.correct_at)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    if args.header:
        writer.writerow(RUN_FIELDS)
    writer.writerow([
        record.seed, record.infeasible_count, record.evaluations_used, _real(record.pois),
        _real(record.best_fitness), record.generations, record.offspring_generated,
        record.mutant_infeasible_count,
    ])
    return EXIT_OK


# ── grid ──────────────────────────────────────────────────────────────────────

def cmd_grid(args) -> int:
    if args.write_default:
        Path(args.write_default).write_text(json.dumps(grid_to_dict(default_grid()), indent=2) + "\n")
        print(f"default grid written to {args.write_default}")
        return EXIT_OK
    if args.grid is None:
        raise UsageError("grid: a grid file is required (or --write-default PATH)")
    if args.out is None:
        raise UsageError("grid: --out is required")

    grid = load_grid(args.grid)
    overrides = {
        "dimensionality": args.n,
        "budget_per_dimension": args.budget_per_dim,
        "runs_per_config": args.runs,
        "master_seed": args.seed,
    }
    grid = replace(grid, **{k: v for k, v in overrides.items() if v is not None})
    table = execute(grid, parallelism=args.parallelism, out_path=args.out)
    failed = len(table.failures())
    print(f"{len(table)} rows written to {args.out} ({failed} failed)")
    return EXIT_OK


# ── analyze ───────────────────────────────────────────────────────────────────

def _matches(args, mutation, crossover, strategy, pop_size) -> bool:
    return (
        (args.mutation is None or mutation == args.mutation)
        and (args.crossover is None or crossover == args.crossover)
        and (args.strategy is None or strategy == args.strategy)
        and (args.pop_size is None or pop_size == args.pop_size)
    )


def _expected_heads(grid, args) -> dict[int, list]:
    """Output heads for every grid configuration the family filters keep."""
    heads = {}
    for config_id, config in enumerate(expand(grid).configs):
        family = (config.mutation.value, config.crossover.value, config.strategy.value, config.pop_size)
        if _matches(args, *family):
            heads[config_id] = [
                config_id, *family, f"{config.scale_factor:g}", f"{config.crossover_rate:g}",
            ]
    return heads


def cmd_analyze(args) -> int:
    table = load(args.results)
    grid = load_grid(args.grid) if args.grid else None
    if args.runs:
        expected = args.runs
    elif grid is not None:
        expected = grid.runs_per_config
    else:
        expected = max((r.run_index + 1 for r in table.rows), default=0)
    table.rows = [r for r in table.rows if _matches(args, *r.family)]

    first_row = {}
    for row in table.rows:
        first_row.setdefault(row.config_id, row)

    # configurations in the grid with no rows at all still get a line
    heads = _expected_heads(grid, args) if grid is not None else {}
    edpois_by_id = {}
    for config_id, edpois in zip(sorted(first_row), edpois_from_table(table, expected)):
        first = first_row[config_id]
        heads.setdefault(config_id, [
            config_id, first.mutation, first.crossover, first.strategy, first.pop_size,
            f"{first.scale_factor:g}", f"{first.crossover_rate:g}",
        ])
        edpois_by_id[config_id] = edpois

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(ANALYZE_FIELDS)
        for config_id in sorted(heads):
            edpois = edpois_by_id.get(config_id)
            m = edpois.m if edpois is not None else 0
            head = heads[config_id] + [
                m, "yes" if edpois is not None and edpois.complete else "INCOMPLETE",
            ]
            if m == 0:
                writer.writerow(head + ["", "", "", "", "", ""])
                continue
            stats = summarize(edpois)
            writer.writerow(head + [
                edpois.color_class.value, _real(stats.minimum), _real(stats.maximum),
                _real(stats.mean), _real(stats.median), _real(stats.std),
            ])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ── plot ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PlotSpec:
    results_path: Path
    mutation: str
    crossover: str
    strategy: str
    pop_size: int
    out_path: Path
    f_values: tuple[float, ...] | None = None
    cr_values: tuple[float, ...] | None = None

    @property
    def family(self) -> tuple[str, str, str, int]:
        return (self.mutation, self.crossover, self.strategy, self.pop_size)

    @property
    def title(self) -> str:
        return f"DE/{self.mutation}/{self.crossover} {self.strategy}, N={self.pop_size}"


def plot_family(spec: PlotSpec, rows) -> Path:
    family_rows = [r for r in rows if r.family == spec.family]
    if not family_rows:
        raise UsageError(f"no results for {spec.title} in {spec.results_path}")
    svg = render_edpois_svg(family_rows, spec.title, spec.f_values, spec.cr_values)
    write_svg(spec.out_path, svg)
    return spec.out_path


def _plot_lattice(args) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """F and Cr lattice: explicit flags, else the grid file, else the default grid."""
    grid = load_grid(args.grid) if args.grid else default_grid()
    f_values = tuple(args.f_values) if args.f_values else tuple(grid.f_values)
    cr_values = tuple(args.cr_values) if args.cr_values else tuple(grid.cr_values)
    return f_values, cr_values


def cmd_plot(args) -> int:
    table = load(args.results)
    f_values, cr_values = _plot_lattice(args)
    if args.all:
        out_dir = Path(args.out_dir or ".")
        families = sorted({r.family for r in table.rows})
        for mutation, crossover, strategy, pop_size in families:
            spec = PlotSpec(
                results_path=Path(args.results), mutation=mutation, crossover=crossover,
                strategy=strategy, pop_size=pop_size,
                out_path=out_dir / f"{mutation}_{crossover}_{strategy}_N{pop_size}.svg",
                f_values=f_values, cr_values=cr_values,
            )
            plot_family(spec, table.rows)
        print(f"{len(families)} figure(s) written to {out_dir}")
        return EXIT_OK

    missing = [
        flag for flag, value in (
            ("--mutation", args.mutation), ("--crossover", args.crossover),
            ("--strategy", args.strategy), ("--pop-size", args.pop_size), ("--out", args.out),
        ) if value is None
    ]
    if missing:
        raise UsageError(f"plot: {', '.join(missing)} required unless --all is given")
    spec = PlotSpec(
        results_path=Path(args.results), mutation=args.mutation, crossover=args.crossover,
        strategy=args.strategy, pop_size=args.pop_size, out_path=Path(args.out),
        f_values=f_values, cr_values=cr_values,
    )
    plot_family(spec, table.rows)
    print(f"figure written to {spec.out_path}")
    return EXIT_OK


# ── tabulate ──────────────────────────────────────────────────────────────────

def cmd_tabulate(args) -> int:
    table = tabulate_pmax(args.t_grid, args.n_grid)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        csv.writer(out, lineterminator="\n").writerows(table.rows())
    finally:
        if out is not sys.stdout:
            out.close()
    if args.svg:
        write_svg(args.svg, render_pmax_svg(table))
    return EXIT_OK


# ── Parser ────────────────────────────────────────────────────────────────────

def _add_family_filters(parser):
    parser.add_argument("--mutation", choices=_choices(Mutation))
    parser.add_argument("--crossover", choices=_choices(Crossover))
    parser.add_argument("--strategy", choices=_choices(Strategy))
    parser.add_argument("--pop-size", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="de-infeasibility", description=__doc__.split("\n\n")[1].strip())
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one configuration and print its record as CSV")
    run.add_argument("--n", type=int, default=DEFAULT_DIMENSIONALITY, help="dimensionality of [0,1]^n")
    run.add_argument("--budget", type=int, help="evaluation budget (default 10000·n)")
    run.add_argument("--pop-size", type=int, required=True)
    run.add_argument("--f", type=float, required=True, help="scale factor in (0, 2]")
    run.add_argument("--cr", type=float, required=True, help="crossover rate in [0, 1]")
    run.add_argument("--mutation", choices=_choices(Mutation), required=True)
    run.add_argument("--crossover", choices=_choices(Crossover), required=True)
    run.add_argument("--strategy", choices=_choices(Strategy), required=True)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--objective", choices=_choices(ObjectiveKind), default=ObjectiveKind.F0.value)
    run.add_argument("--correct-at", choices=_choices(CorrectionPoint), default=CorrectionPoint.OFFSPRING.value)
    run.add_argument("--header", action="store_true", help="print a header row first")
    run.set_defaults(handler=cmd_run)

    grid = sub.add_parser("grid", help="run a parameter sweep and write the results CSV")
    grid.add_argument("grid", nargs="?", help="JSON grid file")
    grid.add_argument("--parallelism", type=int, default=1)
    grid.add_argument("--out", help="results CSV (resumed if it exists)")
    grid.add_argument("--n", type=int, help="override dimensionality")
    grid.add_argument("--budget-per-dim", type=int, help="override budget per dimension")
    grid.add_argument("--runs", type=int, help="override runs per configuration")
    grid.add_argument("--seed", type=int, help="override master seed")
    grid.add_argument("--write-default", metavar="PATH", help="write the default grid file and exit")
    grid.set_defaults(handler=cmd_grid)

    analyze = sub.add_parser("analyze", help="per-configuration EDPOIS class and statistics")
    analyze.add_argument("results")
    _add_family_filters(analyze)
    analyze.add_argument("--grid", help="grid file; configurations with no rows are reported as INCOMPLETE")
    analyze.add_argument("--runs", type=int, help="expected runs per configuration")
    analyze.add_argument("--out", help="write CSV here instead of stdout")
    analyze.set_defaults(handler=cmd_analyze)

    plot = sub.add_parser("plot", help="render EDPOIS small multiples as SVG")
    plot.add_argument("results")
    _add_family_filters(plot)
    plot.add_argument("--out", help="SVG path for a single family")
    plot.add_argument("--all", action="store_true", help="one SVG per family found in the results")
    plot.add_argument("--out-dir", help="directory for --all")
    plot.add_argument("--grid", help="grid file whose F and Cr values form the lattice")
    plot.add_argument("--f-values", type=_float_list, help="F lattice (default: from --grid or the default grid)")
    plot.add_argument("--cr-values", type=_float_list, help="Cr lattice (default: from --grid or the default grid)")
    plot.set_defaults(handler=cmd_plot)

    tab = sub.add_parser("tabulate", help="tabulate p_max(t, n)")
    tab.add_argument("--t-grid", type=_float_list, default=list(DEFAULT_T_GRID))
    tab.add_argument("--n-grid", type=_int_list, default=list(DEFAULT_N_GRID))
    tab.add_argument("--out", help="CSV path (default stdout)")
    tab.add_argument("--svg", help="also render shaded p_max regions here")
    tab.set_defaults(handler=cmd_tabulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return exc.exit_code

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(filename)s:%(lineno)s %(levelname)s:%(message)s",
    )
    try:
        return args.handler(args)
    except DeLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.exit_code == 1:
            print(parser.format_usage().strip(), file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
