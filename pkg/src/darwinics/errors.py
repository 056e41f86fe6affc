"""Exception types shared across the library."""


class DarwinicsError(Exception):
    """Base class for all library errors."""


class SingularSeparationError(DarwinicsError):
    """Source and field point closer than the configured singular radius."""


class OnAxisError(SingularSeparationError):
    """Field point lies on (or too near) a line source's axis."""


class OutOfRegimeError(DarwinicsError):
    """Parameters outside the validity domain of the (v/c)^2 expansion."""


class SingularSystemError(DarwinicsError):
    """The linear system coupling the accelerations is numerically singular."""


class NonConvergenceError(DarwinicsError):
    """A quadrature or extrapolation failed to meet its tolerance."""


class StepSizeError(DarwinicsError):
    """Finite-difference step estimates disagree beyond tolerance."""


class ScenarioError(DarwinicsError):
    """Scenario file failed to parse or validate.

    Attributes
    ----------
    field : str or None
        Dotted path of the offending field, when identifiable.
    """

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
