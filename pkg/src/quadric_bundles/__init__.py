"""Exact stability calculus for L-quadric bundles on a curve of genus g >= 2."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BundleSpecError,
    GridTooLarge,
    InfeasibleParams,
    InvalidBundle,
    InvalidGenus,
    MaximalDegree,
    NonIntegralDegree,
    PreconditionFailed,
    QuadricBundleError,
    RankOutOfRange,
)
from .params import (  # noqa: E402
    Chamber,
    CriticalValue,
    ModuliParams,
    Provenance,
    alpha_extremes,
    chambers,
    degree_window,
    enumerate_critical_values,
    minimum_gamma_rank,
)
from .model import (  # noqa: E402
    PatternQuadricBundle,
    StabilityVerdict,
    classify,
    generic_rank,
    is_alpha_independent,
    parse_bundle_spec,
    subobject_class,
    underlying_bundle_semistable,
)
