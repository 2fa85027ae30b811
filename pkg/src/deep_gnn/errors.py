"""Error hierarchy for the library and CLI.

Every error carries the process exit code the CLI uses for it:
1 usage/config, 2 data, 3 numeric or verification failure.
"""


class DeepGnnError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


class ConfigError(DeepGnnError):
    """Invalid configuration or command-line usage."""

    exit_code = 1


class DataError(DeepGnnError):
    """Malformed or inconsistent input data."""

    exit_code = 2


class GraphError(DataError):
    """Invalid graph construction input."""


class DatasetError(DataError):
    """A dataset directory failed to load or validate."""


class NumericError(DeepGnnError):
    """A numeric contract was violated."""

    exit_code = 3


class ShapeError(NumericError, ValueError):
    """Operands have incompatible shapes."""


class DisconnectedGraphError(NumericError):
    """A closed-form limit was requested for a disconnected graph."""


class VerificationError(NumericError):
    """A numerical identity check exceeded its tolerance."""


class ConvergenceError(NumericError):
    """An iterative method hit its iteration cap."""


class DivergenceError(NumericError):
    """Training produced a non-finite loss or activation."""
