"""Desk-scale laboratory for semilinear heat flows outside a ball.

The package studies d_t u = L u + t^q |x|^s u^p on the exterior of a ball
(two rays in one dimension) with a Robin condition on the hole: exponent
thresholds and hypothesis checks, positivity-preserving time marching with
blow-up detection, closed-form decaying barriers with machine-checked
certificates, nested-domain truncation studies, and a small experiment
harness with durable records.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .coefficients import (
    RadialCoefficient,
    boundary_dip,
    constant,
    parse_coefficient,
    power_drift,
    rational_decay,
)
from .config import (
    build_bc,
    build_domain,
    build_grid_from,
    build_operator,
    build_profile_spec,
    build_solver,
    config_digest,
    load_config,
    parse_config_text,
    validate_config,
)
from .domain import (
    DomainSpec,
    Field,
    Grid,
    TruncationFamily,
    build_grid,
    exterior_ball,
    restrict_initial_data,
    truncation_family,
    two_ray,
)
from .harness import (
    BracketError,
    EXIT_ERROR,
    EXIT_OK,
    EXIT_UNDETERMINED,
    ExperimentRecord,
    run_experiment,
)
from .integrator import (
    BLOWUP,
    GLOBAL,
    UNDETERMINED,
    EstimateError,
    RunOutcome,
    SchemeError,
    SolverConfig,
    TimeSeries,
    adapt_dt,
    estimate_blowup_time,
    ode_blowup_time,
    ode_envelope,
    run,
    step,
)
from .operators import (
    GLOBAL_POSSIBLE,
    GUARANTEED_BLOWUP,
    OUTSIDE_THEORY,
    AssemblyError,
    BoundaryCondition,
    Clause,
    DiscreteOperator,
    HypothesisError,
    HypothesisReport,
    OneDimRule,
    OperatorSpec,
    assemble_diffusion,
    blowup_threshold,
    dirichlet,
    div_b,
    fujita_exponent,
    gamma0,
    gamma0_report,
    global_threshold,
    hypothesis_report,
    l_and_lstar,
    neumann,
    one_dim_blowup_condition,
    robin,
)
from .profiles import ProfileSpec, bump, gaussian, parse_profile, supersolution_matched
from .supersolution import (
    Certificate,
    SuperSolutionParams,
    admissible_initial_data,
    amplitude_bound,
    gaussian_value,
    initial_data_certificate,
    mu,
    select_params,
    select_t0,
    source_tail_constant,
    verify_boundary,
    verify_interior,
)

__all__ = [
    "__version__",
    # domain
    "DomainSpec", "Grid", "Field", "TruncationFamily",
    "exterior_ball", "two_ray", "build_grid", "truncation_family", "restrict_initial_data",
    # coefficients
    "RadialCoefficient", "constant", "rational_decay", "boundary_dip", "power_drift",
    "parse_coefficient",
    # operators and theory
    "OperatorSpec", "BoundaryCondition", "robin", "neumann", "dirichlet",
    "HypothesisError", "AssemblyError", "Clause", "OneDimRule", "HypothesisReport",
    "GUARANTEED_BLOWUP", "GLOBAL_POSSIBLE", "OUTSIDE_THEORY",
    "fujita_exponent", "blowup_threshold", "global_threshold", "gamma0", "gamma0_report",
    "l_and_lstar", "div_b", "one_dim_blowup_condition", "hypothesis_report",
    "DiscreteOperator", "assemble_diffusion",
    # marching
    "SolverConfig", "SchemeError", "EstimateError", "TimeSeries", "RunOutcome",
    "BLOWUP", "GLOBAL", "UNDETERMINED",
    "adapt_dt", "step", "run", "ode_blowup_time", "ode_envelope", "estimate_blowup_time",
    # barriers
    "SuperSolutionParams", "Certificate", "mu", "select_t0", "source_tail_constant",
    "amplitude_bound", "select_params", "gaussian_value", "verify_interior",
    "verify_boundary", "admissible_initial_data", "initial_data_certificate",
    # profiles
    "ProfileSpec", "gaussian", "bump", "supersolution_matched", "parse_profile",
    # config and harness
    "load_config", "parse_config_text", "validate_config", "config_digest",
    "build_domain", "build_grid_from", "build_operator", "build_bc", "build_solver",
    "build_profile_spec",
    "ExperimentRecord", "BracketError", "run_experiment",
    "EXIT_OK", "EXIT_ERROR", "EXIT_UNDETERMINED",
]
