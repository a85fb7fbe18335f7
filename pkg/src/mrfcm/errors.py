"""Error taxonomy shared by the pipeline.

Each class maps to one CLI exit code so shell callers can triage
failures without parsing messages.
"""


class MrfcmError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1


class DataIOError(MrfcmError):
    """Unreadable, empty, or malformed input files (ragged rows, missing paths)."""

    exit_code = 3


class SchemaError(MrfcmError):
    """Column-level problems: all-missing columns, invalid specs, no usable columns."""

    exit_code = 4


class NumericError(MrfcmError):
    """Numeric preconditions violated: degenerate eigenproblem, too few distinct points."""

    exit_code = 5


class EngineError(MrfcmError):
    """A map or reduce task failed; message names the partition or key."""

    exit_code = 5
