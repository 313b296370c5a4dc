"""Exception hierarchy.

Every exception carries a short machine-readable ``code`` so the CLI can
emit structured error reports without string matching.
"""

from __future__ import annotations


class APCoronaError(Exception):
    """Base class for all library errors."""

    code = "error"


class BasisError(APCoronaError):
    """Invalid frequency basis declaration (duplicate label, bad value)."""

    code = "bad-basis"


class BasisMismatchError(APCoronaError):
    """Operands were built over different frequency bases."""

    code = "basis-mismatch"


class UnresolvableComparisonError(APCoronaError):
    """The sign of a frequency difference could not be decided below the
    precision ceiling.  Usually means the declared basis values are
    rationally dependent."""

    code = "unresolvable-comparison"


class NegativeFrequencyError(APCoronaError):
    """Frequency with negative value where [0, inf) is required."""

    code = "negative-frequency"


class HalfPlaneError(APCoronaError):
    """Evaluation point below the real axis."""

    code = "lower-half-plane"


class SemigroupError(APCoronaError):
    code = "bad-semigroup"


class IrrationalGeneratorError(SemigroupError):
    """Rational-only operation applied to an incommensurable semigroup."""

    code = "irrational-generator"


class SpectrumViolationError(APCoronaError):
    """A polynomial's spectrum leaves the declared semigroup."""

    code = "spectrum-violation"

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class UntrackedCoordinateError(APCoronaError):
    """Test polynomial mentions a coordinate outside the tracked set."""

    code = "untracked-coordinate"


class InfimumZeroError(APCoronaError):
    """Corona infimum is definitively zero (all constant terms vanish)."""

    code = "infimum-zero"


class CoronaConditionError(APCoronaError):
    """A solver required a positive certified corona bound and did not get one."""

    code = "corona-condition"


class InsufficientDegreeError(APCoronaError):
    """Least-squares truncation too small: pre-correction residual >= 1."""

    code = "insufficient-degree"

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotInvertibleError(APCoronaError):
    """Inversion of an element with vanishing constant term."""

    code = "not-invertible"


class IncreaseOrderError(APCoronaError):
    """Truncated exponential tail bound exceeds the requested tolerance."""

    code = "increase-order"

    def __init__(self, message, tail_bound=None):
        super().__init__(message)
        self.tail_bound = tail_bound


class StageCapError(APCoronaError):
    """Logarithm path refinement exceeded the configured stage cap."""

    code = "stage-cap"


class ShapeError(APCoronaError):
    """Matrix shape unsupported (completion requires cols == rows - 1)."""

    code = "unsupported-shape"


class ExpressionError(APCoronaError):
    """Parse error in the surface syntax; carries the offending position."""

    code = "parse-error"

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class ConfigError(APCoronaError):
    code = "bad-config"
