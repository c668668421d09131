"""Weighted rearrangement, one-dimensional reduction, and exponential-functional
maximization on convex cones with monomial weights."""

from .weights import (
    ConeSpec,
    WeightSpec,
    GeometricConstants,
    weight_eval,
    unit_ball_measure_closed_form,
    unit_ball_measure_quadrature,
    ball_measure,
    perimeter,
    compute_constants,
)
from .rearrange import (
    GridFunction,
    StepDistribution,
    RadialProfile,
    distribution,
    decreasing_rearrangement,
    radial_rearrangement,
    composition_integral,
    gradient_seminorm,
    polya_szego_check,
)
from .reduction import (
    OneDProfile,
    ReductionReport,
    profile_to_phi,
    phi_to_profile,
    energy_identity,
    exponential_identity,
    verify_reduction,
    critical_coefficient,
)
from .moser import (
    MoserProblem,
    MoserReport,
    functional_F,
    constraint_G,
    moser_family,
    optimize,
    supremum_estimate,
    build_extremal,
)

__version__ = "0.1.0"
