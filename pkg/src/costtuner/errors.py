"""Exception types shared across the package."""


class ConfigError(Exception):
    """Bad configuration: unknown table, missing parameter entry, malformed file.

    The CLI maps this to exit code 1; everything else unexpected maps to 2.
    """


class UnderdeterminedError(ValueError):
    """A least-squares fit was requested with fewer rows than active columns."""


class UndefinedCorrelationError(ValueError):
    """Pearson correlation is undefined (fewer than two points or zero variance)."""
