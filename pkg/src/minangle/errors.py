"""Exception taxonomy shared across the package.

The split mirrors the CLI exit codes: invalid input (bad arguments,
malformed files) is distinct from degenerate geometry (angles are
mathematically undefined), which is distinct from a generator giving up.
"""


class MinAngleError(Exception):
    """Base class for all package errors."""


class InvalidInputError(MinAngleError, ValueError):
    """Malformed input: bad arguments, files, indices, or thresholds."""


class DegeneracyError(MinAngleError, ArithmeticError):
    """Geometry too close to degenerate for the requested quantity."""


class GenerationError(MinAngleError, RuntimeError):
    """A rejection-sampling generator exhausted its draw budget."""
