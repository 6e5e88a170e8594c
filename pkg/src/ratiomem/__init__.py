"""Ratio-dependent predator-prey systems with exponentially fading memory.

Library layout:

- model:      growth laws, functional responses, equilibria, right-hand sides
- linearize:  undelayed / delayed Jacobians with named entries
- stability:  condition checks, characteristic polynomials, H(alpha), scans
- simulate:   adaptive Runge-Kutta integration with dense output
- oracle:     independent brute-force cross-checks (`ratiomem verify`)
- serialize:  shared JSON/CSV wire formats
- cli/server: command line and HTTP surfaces
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    DomainError,
    InapplicableError,
    NoPositiveEquilibriumError,
    NoSurvivalError,
    NumericFailureError,
    PositivityFloorError,
    RatioMemError,
    SingularStateError,
    StepUnderflowError,
    UnsupportedDimensionError,
)
from .model import (
    Equilibrium,
    FunctionalResponse,
    GrowthLaw,
    ModelParams,
    NullclineMesh,
    State,
    equilibrium,
    equilibrium_ratio,
    equilibrium_residuals,
    predation_pressure,
    prey_nullcline_sample,
    response_derivative,
    response_value,
    rhs_delayed,
    rhs_undelayed,
)
from .linearize import JacobianPair, arrow_matrix, build_a11, build_jacobians, delayed_matrix
from .stability import (
    AlphaScan,
    DelayRobustness,
    HurwitzCubic,
    HurwitzQuartic,
    Polynomial,
    QuarticCoeffs,
    SignStability,
    StabilityReport,
    alpha_scan,
    allee_zone,
    certify_alpha_endpoints,
    char_poly,
    char_poly_delayed,
    check_delay_robust,
    check_sign_stability,
    check_strategy_threshold,
    cluster_roots,
    eigenvalues,
    hurwitz_critical,
    hurwitz_cubic,
    hurwitz_quartic,
    ivlev_product_threshold,
    ivlev_strategy_bound,
    quartic_coeffs,
    spectral_abscissa,
    stability_class,
    stability_report,
)
from .simulate import Trajectory, detect_sustained_oscillation, integrate, memory_consistency_check
from .presets import PRESETS, load_preset
