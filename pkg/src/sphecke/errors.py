"""Shared exception types.

``InvalidInput`` covers every precondition failure a caller can trigger
(the CLI maps it to exit code 2); ``WindowError`` flags a graded
operation whose requested output grades are not exactly determined by
the materialized grades of its inputs.
"""


class InvalidInput(ValueError):
    """Caller violated a documented precondition."""


class NonDominantError(InvalidInput):
    pass


class LengthMismatchError(InvalidInput):
    pass


class GradeMismatchError(InvalidInput):
    pass


class WeylCapError(InvalidInput):
    """Weyl group enumeration exceeded the configured cap."""


class WindowError(InvalidInput):
    """Requested grades are not exactly computable from the input windows."""


class PoleError(InvalidInput):
    """Evaluation requested at a pole."""
