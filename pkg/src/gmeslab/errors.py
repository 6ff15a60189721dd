"""Exception types shared across the package.

The CLI maps these onto exit codes: domain/config/truncation/degeneracy
problems are usage-level failures (exit 2), solver failures exit 3.
"""


class GmeslabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GmeslabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConfigError(GmeslabError, ValueError):
    """A tolerance, grid, or configuration value is invalid."""


class TruncationError(GmeslabError):
    """A requested cutoff is too small, or an adaptive cutoff exceeds the hard cap."""


class SolverError(GmeslabError):
    """A root solve or numerical search failed to converge or to bracket."""


class DegenerateInputError(GmeslabError, ValueError):
    """Input is too degenerate for the operation (e.g. near-zero amplitude set)."""
