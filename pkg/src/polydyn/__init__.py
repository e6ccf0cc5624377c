"""Second-order convex-combination state-space process.

Forward simulation, convergence classification and closed-form limits of

    X(k+1) = A W X(k) + (I - A) X(0),

inverse design of initial states and damping values for target
configurations, and net-influence centrality.
"""

from .centrality import alpha_centrality, net_influence, perron_centrality
from .design import (
    DesignSolution,
    FeasibilityReport,
    affine_map,
    design_family,
    solve_damping,
    solve_initial,
    unbiased_design,
)
from .dynamics import (
    ConvergenceClass,
    LimitResult,
    SingularSystemError,
    Trajectory,
    classify,
    closed_form_limit,
    evolve_v,
    iterate,
    neumann_limit,
    neumann_order,
    spectral_radius_bounds,
    step,
)
from .scenarios import (
    Histogram,
    ScenarioSpec,
    cleavage_scenario,
    count_modes,
    histogram,
    polytope_init,
    random_strong_w,
    regular_polygon,
    two_value_damping,
    uniform_damping,
)
from .stochastic import (
    BoundingBox,
    StructureClass,
    ValidationReport,
    as_damping,
    as_influence_matrix,
    as_state,
    bounding_box,
    contains,
    structure_class,
    validate_system,
)

__version__ = "0.1.0"
