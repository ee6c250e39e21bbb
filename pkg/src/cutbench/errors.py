"""Exception hierarchy shared across the package."""


class CutbenchError(Exception):
    """Base class for all package errors."""


class ValidationError(CutbenchError):
    """A parameter or invariant check failed; the message names the constraint."""


class UnsupportedTopologyError(ValidationError):
    """A two-qubit gate spans non-adjacent segments of the partition."""


class CapacityError(CutbenchError):
    """A state vector would exceed the configured qubit memory guard."""


class DegenerateFitError(CutbenchError):
    """Boundary fitting received one-class data or produced no usable line."""


class BudgetExceededError(CutbenchError):
    """A cooperative deadline expired mid-run; timeouts are data, not crashes."""
