"""Sharp uniform-convexity geometry for Lebesgue norms.

The package computes the extremal (Bellman) function of the three-norm
problem on its natural cone, the induced sharp modulus of convexity, and
the concave-hull geometry behind both: boundary arcs and their torsion,
the chord foliation below the quadratic exponent, and a numeric concave
envelope above it.  A brute-force oracle layer validates every computed
quantity from the definitions.
"""

from .bellman import BellmanValue, b3_unit, envelope_surface, eval_B, eval_B3
from .boundary import (
    BoundaryParam,
    TorsionValue,
    boundary_value,
    cone_boundary_value,
    gamma,
    torsion_closed,
    torsion_numeric,
)
from .domain import (
    ConePoint,
    DomainError,
    Exponent,
    PreconditionError,
    SectionPoint,
    in_cone,
    lift_to_cone,
    project_to_section,
    tight_case,
    violated_inequality,
)
from .envelope import (
    BoundarySample,
    HullSurface,
    InsufficientSamplingError,
    build_envelope,
    chord_oracle_eval,
    eval_envelope,
    eval_envelope_many,
    sample_boundary,
)
from .foliation import Chord, axis_range, b_on_axis, chord_through, solve_branch_param
from .modulus import ModulusCurve, ModulusPoint, delta_bellman, delta_closed, modulus_curve
from .oracle import (
    FunctionPair,
    StepFunction,
    clarkson_suite,
    concatenate,
    hanner_suite,
    lower_bound_B3,
    norms,
    random_pair,
    sum_norm,
    verify_clarkson,
    verify_concavity,
    verify_hanner,
    verify_majorant,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BellmanValue",
    "BoundaryParam",
    "BoundarySample",
    "Chord",
    "ConePoint",
    "DomainError",
    "Exponent",
    "FunctionPair",
    "HullSurface",
    "InsufficientSamplingError",
    "ModulusCurve",
    "ModulusPoint",
    "PreconditionError",
    "SectionPoint",
    "StepFunction",
    "TorsionValue",
    "axis_range",
    "b3_unit",
    "b_on_axis",
    "boundary_value",
    "build_envelope",
    "chord_oracle_eval",
    "chord_through",
    "clarkson_suite",
    "concatenate",
    "cone_boundary_value",
    "delta_bellman",
    "delta_closed",
    "envelope_surface",
    "eval_B",
    "eval_B3",
    "eval_envelope",
    "eval_envelope_many",
    "gamma",
    "hanner_suite",
    "in_cone",
    "lift_to_cone",
    "lower_bound_B3",
    "modulus_curve",
    "norms",
    "project_to_section",
    "random_pair",
    "sample_boundary",
    "solve_branch_param",
    "sum_norm",
    "tight_case",
    "torsion_closed",
    "torsion_numeric",
    "verify_clarkson",
    "verify_concavity",
    "verify_hanner",
    "verify_majorant",
]
