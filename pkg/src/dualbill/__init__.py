"""Rationally integrable dual billiards on the parabola w = z^2.

The seven exotic billiard families, their phase-space dynamics, rational
first integrals, invariant curves and forms, elliptic period data, and a
seeded property-check engine with a CLI front end.
"""

from .billiards import (
    ALL_FAMILY_TAGS,
    BilliardFamily,
    DegenerateTangencyError,
    OrbitRecord,
    SingularTangencyError,
    billiard_map,
    f_coefficient,
    involution,
    orbit,
)
from .curves import (
    EllipticModel,
    FiberModel,
    LevelCurveModel,
    branch_points,
    critical_fiber_components,
    curve_parameter,
    elliptic_model,
    fiber_type,
    is_regular,
    level_curve_model,
    lift_fiber,
    parametrize_level,
    point_on_level,
)
from .forms import (
    TangentSample,
    abel_steps,
    area_form,
    area_pullback_residual,
    fiber_differential,
    fiber_form,
    halfstep_jacobian,
)
from .geometry import (
    E_INFINITY,
    PhasePoint,
    ProjectiveMap,
    ProjectivePoint,
    b_family_equivalence,
    c_family_equivalence,
    conic_point,
    on_conic,
    order3_symmetries,
    tangency_points,
    tangent_line,
)
from .integrals import (
    IndeterminacyError,
    coefficients_a1,
    coefficients_a2,
    critical_values,
    eval_integral,
    first_integral,
    gradient,
    hessian,
    indeterminacy_set,
    true_critical_points,
)
from .numerics import (
    DEFAULT_TOL,
    INF,
    Polynomial,
    SphereValue,
    Tolerance,
    contour_integrate,
    finite_diff_jacobian,
    roots,
    sphere_eq,
)
from .verify import CheckReport, CheckSuite, default_suite, run_suite

__version__ = "0.1.0"
