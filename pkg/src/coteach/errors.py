"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: :class:`ParameterError` (and
subclasses) exit with 1, numeric/convergence failures exit with 2.
"""


class TeachingError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(TeachingError, ValueError):
    """Invalid argument or configuration value."""


class IngestionError(ParameterError):
    """Malformed input file; the message names the offending row/column."""


class CombinatorialLimitError(ParameterError):
    """Exhaustive search refused; the message states the subset count."""


class UndefinedMetricError(ParameterError):
    """A metric is undefined for the given inputs (e.g. zero-variance reference)."""


class NumericError(TeachingError, ArithmeticError):
    """Non-finite intermediate value.  Carries optional round/teacher context."""

    def __init__(self, message, *, round_index=None, teacher_id=None, trace=None):
        if teacher_id is not None:
            message = f"{message} (teacher {teacher_id})"
        if round_index is not None:
            message = f"{message} (round {round_index})"
        super().__init__(message)
        self.round_index = round_index
        self.teacher_id = teacher_id
        self.trace = trace


class DomainError(NumericError):
    """Argument outside the mathematical domain of a conjugate function."""


class ConvergenceError(NumericError):
    """Iteration budget exhausted before reaching tolerance."""

    def __init__(self, message, *, grad_norm=None, **kwargs):
        if grad_norm is not None:
            message = f"{message} (final gradient norm {grad_norm:.3e})"
        super().__init__(message, **kwargs)
        self.grad_norm = grad_norm
