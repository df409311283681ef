"""Exception types shared across the package.

Each operation documents which of these it can raise.  They all derive from
ArborError so callers can catch everything from this package in one clause;
the ValueError/RuntimeError mix-ins keep behaviour sane for generic callers.
"""


class ArborError(Exception):
    """Base class for all errors raised by this package."""


class InvalidWord(ArborError, ValueError):
    """Degree word fails the plane-tree prefix condition."""


class InvalidStatistics(ArborError, ValueError):
    """Degree counts do not describe a forest with the required tree count."""


class KTooLarge(ArborError, ValueError):
    """Requested more spinal degrees than the marked node has ancestors."""


class TooLarge(ArborError, ValueError):
    """Instance exceeds the size cap of an exact enumeration routine."""


class UsageExceeded(ArborError, ValueError):
    """A spine prefix uses some degree more often than the statistics allow."""


class PathDegenerate(ArborError, ValueError):
    """All internal degrees equal one, so the tail-bound ratio is undefined."""


class HasOnes(ArborError, ValueError):
    """Bound requires no degree-one nodes but the statistics contain some."""


class OutOfRange(ArborError, ValueError):
    """Argument lies outside the validity region of a bound or series."""


class OutOfDomain(ArborError, ValueError):
    """Evaluation point is outside the domain of a power series."""


class Diverged(ArborError, ArithmeticError):
    """Series evaluation overflowed before the truncation rule kicked in."""


class RhoUnknown(ArborError, ValueError):
    """Radius of convergence could not be determined for a weight sequence."""


class PhiDiverges(ArborError, ArithmeticError):
    """Normalising series diverges where a probability law was requested."""


class ZeroPartition(ArborError, ValueError):
    """No tree of the requested size carries positive weight."""


class BadParameters(ArborError, ValueError):
    """Transformation parameters violate their stated constraints."""


class AttemptsExhausted(ArborError, RuntimeError):
    """Rejection sampler hit its attempt budget without an acceptance."""


class InvalidDistribution(ArborError, ValueError):
    """Offspring masses are negative, do not sum to one, or lack mass at zero."""
