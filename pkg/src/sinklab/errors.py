"""Error hierarchy shared by the library, CLI, and service.

Exit codes (CLI) and HTTP statuses (service) are derived from the class,
so everything that can go wrong should be raised as one of these.
"""


class SinklabError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class InputError(SinklabError):
    """Bad user input: parse failures, non-positive entries, violated
    preconditions (dimension mismatch, K = 1, unbalanced targets, ...)."""

    exit_code = 1


class NumericError(SinklabError):
    """Numeric failure: NaN/overflow mid-iteration, non-convergence where
    convergence is required, violated uniqueness, bracketing failure."""

    exit_code = 2

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ClassificationError(NumericError):
    """A two-value symmetric 3x3 matrix failed to match any canonical class.

    Expected for minority patterns that need an asymmetric row/column
    permutation to reach a representative (see classify), and for entry
    values indistinguishable from the all-equal matrix.
    """


class ResourceLimitError(SinklabError):
    """A configured resource bound was exceeded (denominator bit guard).

    Carries whatever partial work was completed so callers can salvage it.
    """

    exit_code = 3

    def __init__(self, message, trace=None, report=None):
        super().__init__(message)
        self.trace = trace
        self.report = report
