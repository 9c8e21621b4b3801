"""Module containing package specific exceptions."""

import typing as t

DATA_ERROR_EXIT_CODE = 2
ANNIHILATION_EXIT_CODE = 3


class QFilterError(Exception):
    """Base class for all qfilter errors."""

    exit_code: t.ClassVar[int] = DATA_ERROR_EXIT_CODE
    default_message: t.ClassVar[str] = "Unexpected qfilter error."

    def __init__(self, message: str | None = None) -> None:
        """Initialise with the given message, or the class default."""
        self.message = message or self.default_message
        super().__init__(self.message)


class CapacityError(QFilterError):
    default_message = "Requested register size is outside the supported range."


class SizeCapError(QFilterError):
    default_message = "Dense representation would exceed the configured size cap."


class StateValidationError(QFilterError):
    default_message = "Amplitudes do not describe a valid normalised state."


class GateValidationError(QFilterError):
    default_message = "Gate indices collide or fall outside the register."


class ImpossibleOutcomeError(QFilterError):
    default_message = "The requested measurement outcome has zero probability."


class DegenerateInputError(QFilterError):
    default_message = "Input has no non-zero value so it cannot be normalised."


class EncodingModeError(QFilterError):
    default_message = "Probability encoding requires non-negative values."


class ShapeMismatchError(QFilterError):
    default_message = "Amplitude vector does not match the encoded signal's shape."


class DegenerateSpecError(QFilterError):
    default_message = "Filter marks no basis state or every basis state."


class FilterRangeError(QFilterError):
    default_message = "Filter edge parameters are out of range for the register size."


class AnnihilationError(QFilterError):
    exit_code = ANNIHILATION_EXIT_CODE
    default_message = "Filter removes every component of the input, nothing survives postselection."


class RetryBudgetError(QFilterError):
    exit_code = ANNIHILATION_EXIT_CODE
    default_message = "Postselection did not succeed within the allowed number of trials."


class SchemeError(QFilterError):
    default_message = "Transpose schemes require an even, positive number of qubits."


class LayoutError(QFilterError):
    default_message = "Basis layout is not valid for the transpose scheme."


class FormatError(QFilterError):
    default_message = "Malformed input file."

    def __init__(self, message: str | None = None, *, line: int | None = None, offset: int | None = None) -> None:
        """Initialise with the message and where in the file parsing failed."""
        self.line = line
        self.offset = offset
        location = ""
        if line is not None:
            location = f" (line {line})"
        elif offset is not None:
            location = f" (byte offset {offset})"
        super().__init__(f"{message or self.default_message}{location}")
