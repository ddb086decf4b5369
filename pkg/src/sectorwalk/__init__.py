"""Distributions of a planar random walk with sector-restricted steps.

The walk sums N unit-length steps whose angles are i.i.d. uniform on
[-a, a] with a <= pi/2. This package provides the exact two-step laws,
the exact support geometry, a grid recursion for moderate N, a large-N
approximation built on the generalized chi-square distribution, and a
deterministic Monte-Carlo oracle, plus a CLI tying them together.
"""

from .core import (
    HALF_PI,
    MomentSet,
    PolarPoint,
    WalkConfig,
    clt_moments,
    step_angle_cdf,
    step_angle_pdf,
    step_moments,
    validate_config,
)
from .errors import (
    ConvergenceError,
    DomainError,
    EmptyInputError,
    GridError,
    SectorWalkError,
)
from .exact_two import ExactTwoStep
from .genchi2 import GenChi2Params, normal_cdf, normal_pdf
from .largen import LargeNModel, in_support_mass
from .mc import EmpiricalDistribution, SampleBatch, empirical_cdf, ks_distance, sample_walk
from .recursion import OneStepSource, PolarGridDistribution, compute_grid, propagate
from .support import SupportBoundary, contains, min_radius, uniqueness_threshold

__version__ = "1.0.0"

__all__ = [
    "HALF_PI",
    "MomentSet",
    "PolarPoint",
    "WalkConfig",
    "clt_moments",
    "step_angle_cdf",
    "step_angle_pdf",
    "step_moments",
    "validate_config",
    "ConvergenceError",
    "DomainError",
    "EmptyInputError",
    "GridError",
    "SectorWalkError",
    "ExactTwoStep",
    "GenChi2Params",
    "normal_cdf",
    "normal_pdf",
    "LargeNModel",
    "in_support_mass",
    "EmpiricalDistribution",
    "SampleBatch",
    "empirical_cdf",
    "ks_distance",
    "sample_walk",
    "OneStepSource",
    "PolarGridDistribution",
    "compute_grid",
    "propagate",
    "SupportBoundary",
    "contains",
    "min_radius",
    "uniqueness_threshold",
    "__version__",
]
