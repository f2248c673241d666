"""
Exceptions raised by the boundary-dynamics library.

Outcomes that are answers rather than failures (Unresolved membership,
NotFilling, a word-problem "No") are returned as values instead.
"""


class BoundaryError(Exception):
    """Base class for every library error."""


class ConfigError(BoundaryError):
    pass


class SurfaceConfigError(BoundaryError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class UnsupportedSurface(BoundaryError):
    pass


class InvariantViolation(BoundaryError):
    """A runtime check of a structural guarantee failed."""


# exact geometry
class EllipticInput(BoundaryError):
    pass


class IdentityInput(BoundaryError):
    pass


class NotHyperbolic(BoundaryError):
    pass


class UnresolvedPrecision(BoundaryError):
    """An interval enclosure straddles the comparison point; refine and retry."""


# surface model
class NotRational(BoundaryError):
    pass


# loop cutting
class NotInDelta(BoundaryError):
    pass


class WitnessSearchExhausted(BoundaryError):
    pass


class DepthExceeded(BoundaryError):
    pass


class SamePoint(BoundaryError):
    pass


class StepBudgetExceeded(BoundaryError):
    def __init__(self, message: str, rational: bool):
        super().__init__(message)
        self.rational = rational


class TooFewSteps(BoundaryError):
    pass


# topology
class NotAnAutomorphism(BoundaryError):
    pass


class PeripheralNotPreserved(BoundaryError):
    pass


class InsufficientDepth(BoundaryError):
    pass


class NotFillingWithinDepth(BoundaryError):
    pass


class DisjointnessFailure(BoundaryError):
    def __init__(self, message: str, mapping_class=None):
        super().__init__(message)
        self.mapping_class = mapping_class


class InconsistentRotation(BoundaryError):
    pass


# analysis / cli
class IoFailure(BoundaryError):
    pass
