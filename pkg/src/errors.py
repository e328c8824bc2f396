"""
src/errors.py

Exception hierarchy shared by every module, and the exit codes the CLI
maps them to.

    DimensionError      — vector length does not match the domain
    ConfigurationError  — invalid DeConfig, GridSpec or flag value
    ArgumentError       — analysis input outside its valid range
    ResultsParseError   — malformed results CSV (carries line and column)
    NumericError        — non-finite coordinates inside a run
    UsageError          — bad command-line usage
"""


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class DeLabError(Exception):
    """Base class for every error raised by this package."""

    exit_code = EXIT_USAGE


class DimensionError(DeLabError, ValueError):
    pass


class ConfigurationError(DeLabError, ValueError):
    pass


class ArgumentError(DeLabError, ValueError):
    pass


class UsageError(DeLabError):
    pass


class NumericError(DeLabError, ArithmeticError):
    exit_code = EXIT_NUMERIC


class ResultsParseError(DeLabError, ValueError):
    """
    Raised when a results file cannot be read back.

    Args:
        message: What is wrong with the value
        line:    1-based line number in the file (header is line 1)
        column:  Column name, or None when the whole line is malformed
    """

    exit_code = EXIT_DATA

    def __init__(self, message: str, line: int, column: str | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column '{column}'" if column else "")
        super().__init__(f"{where}: {message}")


class MissingCellsError(DeLabError):
    """A plot was requested for a family whose (F, Cr) lattice has holes."""

    exit_code = EXIT_DATA

    def __init__(self, missing: list[tuple[float, float]]):
        self.missing = missing
        pairs = ", ".join(f"(F={f:g}, Cr={cr:g})" for f, cr in missing)
        super().__init__(f"results are missing {len(missing)} (F, Cr) cell(s): {pairs}")
