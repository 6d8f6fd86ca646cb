"""Exception types raised by the geometry and norm kernels."""


class PedalError(Exception):
    """Base class for every error raised by this package."""


class DegenerateCurve(PedalError):
    pass


class DegenerateDenominator(PedalError):
    """The pedal radius vector is tangent to the pedal (p x p' vanishes)."""


class DegenerateSurface(PedalError):
    pass


class MissingImplicitForm(PedalError):
    pass


class OutsideDomain(PedalError):
    """A norm was evaluated outside its positive-denominator cone."""


class NumericalBreakdown(PedalError):
    pass


class FamilyMismatch(PedalError):
    pass


class PreconditionViolated(PedalError):
    pass


class NoSignChange(PedalError):
    """Bisection endpoints carry the same verdict."""


class EngineUnavailable(PedalError):
    """The requested verdict engine does not apply to the family."""
