"""Exception hierarchy shared by all modules."""


class AlignError(ValueError):
    """Base class for every error raised by this package."""


class InvalidDimensionError(AlignError):
    pass


class DimensionMismatchError(AlignError):
    pass


class IncompletePlanError(AlignError):
    """A submessage has no offset in the plan."""


class PlanMismatchError(AlignError):
    """Plan keys disagree with the messaging matrix."""


class NotInterferenceFreeError(AlignError):
    """DoF was requested for a plan that fails its separability check."""


class ConstructionError(AlignError):
    """No alignment plan exists (or was found) at the requested dimension."""


class SearchInconclusive(AlignError):
    """The oracle exhausted its node budget before reaching a verdict."""

    def __init__(self, message, nodes_explored=0):
        super().__init__(message)
        self.nodes_explored = nodes_explored


class SchemaError(AlignError):
    """Malformed scenario file. ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
