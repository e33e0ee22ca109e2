"""Exception taxonomy shared across the toolkit."""


class InstanceFormatError(ValueError):
    """Instance file or instance parameters are malformed."""


class CapExceededError(RuntimeError):
    """Group closure enumeration passed the configured element cap."""


class ReducibleInstanceError(RuntimeError):
    """Operation requires an irreducible matrix group."""


class NonSpanningOrbitError(RuntimeError):
    """Sumset iteration stabilized below the full space (orbit does not span)."""


class SpanFailureError(RuntimeError):
    """No set of group translates of the given vector spans the space."""


class NotUnipotentError(ValueError):
    """Matrix is not unipotent where unipotence is required."""


class SingularSystemError(ValueError):
    """Linear system over F_p has no solution."""


class SearchBudgetExceededError(RuntimeError):
    """Power-sum search tables would exceed the configured budget.

    Deliberately distinct from an exhaustive no-solution outcome, which is
    reported as a plain None result.
    """


class WitnessConstructionError(RuntimeError):
    """Line witness construction failed (power-sum system unexpectedly unsolvable)."""


class BoundViolationError(RuntimeError):
    """A verified decomposition violated its certified length bound.

    This signals a defect in the implementation, never a valid outcome.
    """
