"""Exception types raised by the library and mapped to CLI exit codes."""


class QuadricBundleError(ValueError):
    """Base class; every library error is an input error (CLI exit 2)."""


class InfeasibleParams(QuadricBundleError):
    pass


class RankOutOfRange(QuadricBundleError):
    pass


class PreconditionFailed(QuadricBundleError):
    pass


class MaximalDegree(PreconditionFailed):
    pass


class NonIntegralDegree(PreconditionFailed):
    pass


class InvalidGenus(QuadricBundleError):
    pass


class InvalidBundle(QuadricBundleError):
    """Bundle data violates symmetry, degree or non-vanishing constraints."""


class BundleSpecError(InvalidBundle):
    """Bundle-spec text could not be parsed."""


class GridTooLarge(QuadricBundleError):
    pass
