"""Exception types raised across relaxcheck.

Each error carries the process exit code the CLI uses when it escapes a command.
They derive from Exception rather than ValueError so pydantic validators let
them through unwrapped.
"""

from enum import IntEnum


class ExitCode(IntEnum):
    OK = 0
    VIOLATION = 1
    INPUT_ERROR = 2
    NUMERICAL_FAILURE = 3
    NOT_HERMITIAN = 4
    NOT_COMPLETELY_POSITIVE = 5


class RelaxcheckError(Exception):
    exit_code: ExitCode = ExitCode.INPUT_ERROR

    # `build` reports invariant failures with their own codes
    build_exit_code: ExitCode | None = None


class InvalidDimensionError(RelaxcheckError):
    pass


class DimensionMismatchError(RelaxcheckError):
    pass


class WrongDimensionError(RelaxcheckError):
    pass


class SchemaError(RelaxcheckError):
    pass


class NotHermitianError(RelaxcheckError):
    build_exit_code = ExitCode.NOT_HERMITIAN


class NotCompletelyPositiveError(RelaxcheckError):
    build_exit_code = ExitCode.NOT_COMPLETELY_POSITIVE


class InvalidRateError(RelaxcheckError):
    pass


class InvalidTimeError(RelaxcheckError):
    pass


class InvalidStateError(RelaxcheckError):
    pass


class InvalidGridError(RelaxcheckError):
    pass


class NotTracePreservingError(RelaxcheckError):
    exit_code = ExitCode.NUMERICAL_FAILURE


class NumericalError(RelaxcheckError):
    exit_code = ExitCode.NUMERICAL_FAILURE


class UnsupportedSpectrumError(RelaxcheckError):
    exit_code = ExitCode.NUMERICAL_FAILURE
