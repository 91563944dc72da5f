"""Exception types shared across the package.

Every error raised on a violated precondition derives from SftSpectraError,
so callers can catch the package's failures with a single except clause.
"""


class SftSpectraError(Exception):
    pass


class NotSquareError(SftSpectraError):
    """Transition matrix is not square."""


class ZeroRowOrColumnError(SftSpectraError):
    """Some symbol has no successor or no predecessor."""


class NotPrimitiveError(SftSpectraError):
    """Operation requires a primitive transition structure."""


class ConvergenceError(SftSpectraError):
    """Iterative solver exhausted its budget before reaching tolerance."""


class WordNotAdmissibleError(SftSpectraError):
    """A word contains a forbidden transition or an out-of-range symbol."""


class OrbitNotAdmissibleError(SftSpectraError):
    """Cyclic word is not admissible, or is a power of a shorter word."""


class OrbitsIntersectError(SftSpectraError):
    """Two periodic orbits share a point."""


class SftMismatchError(SftSpectraError):
    """Objects built over different subshifts were combined."""


class NotConvexError(SftSpectraError):
    """Grid data fails the discrete convexity test."""


class NotConcaveError(SftSpectraError):
    """Grid data fails the discrete concavity test."""


class SlopesNotStabilizedError(SftSpectraError):
    """Boundary slopes of a sampled convex function have not settled."""


class MaxMismatchError(SftSpectraError):
    """Maximum value differs from the declared one beyond tolerance."""


class NonUniqueMaximizerError(SftSpectraError):
    """Candidate spectrum has a flat top wider than one grid cell."""


class NegativeValuesError(SftSpectraError):
    """Candidate spectrum takes negative values."""


class EmptyGraphError(SftSpectraError):
    """A graph operation received no points."""


class PeriodTooLargeError(SftSpectraError):
    """Requested period exceeds the enumeration guard."""


class TooLargeError(SftSpectraError):
    """Requested enumeration exceeds the size guard."""


class HypothesisViolationError(SftSpectraError):
    """A realization target fails one of its standing hypotheses.

    Carries the name of the violated hypothesis and the measured violation.
    """

    def __init__(self, hypothesis: str, violation: float, message: str = ""):
        self.hypothesis = hypothesis
        self.violation = violation
        text = message or f"hypothesis {hypothesis!r} violated by {violation:g}"
        super().__init__(text)


class MaxEntropyMismatchError(HypothesisViolationError):
    """Spectrum target's maximum differs from the subshift's entropy."""

    def __init__(self, violation: float, message: str = ""):
        super().__init__("max_entropy", violation, message)


class WitnessNotFoundError(SftSpectraError):
    """No periodic-orbit witness pair was found within the period budget."""


class ConfigInvalidError(SftSpectraError):
    """Run configuration failed validation; message is line-precise."""
