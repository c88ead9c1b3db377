"""Exception types shared across the package."""


class MinkstringError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(MinkstringError, ValueError):
    pass


class NotLorentz(MinkstringError, ValueError):
    """Matrix fails the Lorentz-group invariant L^T eta L = eta."""


class SnapFailure(MinkstringError, ArithmeticError):
    """An eigenvalue lies too far from both the real and imaginary axes.

    Signals numerical breakdown: eigenvalues of the raised 2-form operator
    are provably real or pure imaginary in Lorentzian signature.
    """

    def __init__(self, distance, threshold):
        self.distance = distance
        self.threshold = threshold
        super().__init__(
            f"eigenvalue axis-snap distance {distance:.3e} exceeds {threshold:.3e}"
        )


class DegenerateSignature(MinkstringError, ValueError):
    """Gram-matrix signature impossible for a subspace of a Lorentzian space."""


class ClassificationUnstable(MinkstringError, ArithmeticError):
    """Spectral margins below tolerance; classification may be unreliable."""

    def __init__(self, message, margin=None):
        self.margin = margin
        super().__init__(message)


class NotCanonical(MinkstringError, ValueError):
    """Input 2-form is not one of the canonical patterns."""


class DimensionTooSmall(MinkstringError, ValueError):
    """Requested canonical class does not fit in the given dimension."""


class ParamViolation(MinkstringError, ValueError):
    """Canonical-class parameters violate their stated constraints."""


class ZeroField(MinkstringError, ValueError):
    """The zero Killing field cannot be classified."""


class NotABracketPair(MinkstringError, ValueError):
    """The pair does not satisfy the bracket relation [xi, eta] = xi."""


class ImpossibleTranslation(MinkstringError, ValueError):
    """A timelike or spacelike translation admits no bracket partner."""


class NonSeparable(MinkstringError, ValueError):
    """Hamiltonian has x-P cross terms; leapfrog requires a separable form."""


class ConstraintViolated(MinkstringError, ValueError):
    """Phase-space data violates the xi^mu P_mu = 0 constraint."""


class DegenerateSheet(MinkstringError, ValueError):
    """Worldsheet induced metric is not timelike somewhere on the grid."""
