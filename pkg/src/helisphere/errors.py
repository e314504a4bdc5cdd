"""Exception hierarchy shared by every helisphere module."""


class HelisphereError(Exception):
    """Base class for all library errors."""


class DomainError(HelisphereError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class RangeError(DomainError):
    """A target value lies outside the attainable range of a function."""


class SingularityError(HelisphereError):
    """An integrand or coordinate system becomes singular."""


class NoOscillationError(SingularityError):
    """The height function has no pair of bracketing turning points."""


class ToleranceError(HelisphereError):
    """Adaptive step or error control failed to meet the requested tolerance."""


class ConvergenceError(HelisphereError):
    """An iterative solver did not converge."""


class GeometryError(HelisphereError, ValueError):
    """Input vectors violate a geometric constraint (unit length, orthogonality)."""


class DegenerateError(HelisphereError):
    """A surface or profile is degenerate at the requested point."""


class PitchError(HelisphereError, ValueError):
    """The operation is not defined for the given pitch."""


class PitchMismatchError(PitchError):
    """A pitch is not conjugate to the given catenoid parameter."""


class EmptyValidityError(HelisphereError):
    """A prescription admits no height interval with 1 - z^2 - K^2 > 0."""


class NegativeRadicandError(EmptyValidityError):
    """The momentum radicand is negative on the whole scanned interval."""


class PoleError(HelisphereError, ValueError):
    """A point is too close to the projection pole."""
