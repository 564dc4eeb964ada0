"""Stationary-distribution analytics for reflected processes in the quadrant.

Thin re-export of the compiled core: continuous SRBM kernel/gluing/transform
pipeline, density inversion, asymptotic regime classification, and the
discrete lattice-walk counterpart, plus the simulation and sparse-solver
oracles used for cross-validation.
"""

from ._core import (  # noqa: F401
    BranchPoints,
    ConfigError,
    ContinuousModel,
    DecayFit,
    DensityValue,
    DiscreteModel,
    DiscreteRegimeReport,
    Estimate,
    GlueValue,
    GroupReport,
    LatticeSolution,
    NumericError,
    PolePoint,
    PsiPhiConvention,
    RegimeReport,
    SimConfig,
    SimResult,
    StabilityReport,
    TransformStatus,
    TransformValue,
    WalkDiscriminantRoots,
    WalkGroupReport,
    beta_angle,
    boundary_density_nu1,
    branch_points,
    branches_theta1,
    branches_theta2,
    branches_X,
    branches_Y,
    chebyshev_T,
    classify_regime,
    continue_phi1,
    decay_exponent,
    density_at,
    discrete_regime,
    discrete_saddle,
    discriminant_roots,
    eta_walk,
    fit_decay_rate,
    gamma_k,
    glue,
    glue_prime,
    group_order,
    lattice_stationary,
    load_model_json,
    model_to_json,
    normalization_check,
    phi1,
    phi2,
    phi_interior,
    psi1,
    psi2,
    simulate_srbm,
    stability,
    theta_alpha,
    transform_pole_scan,
    walk_group_order,
    walk_K,
    walk_k,
    walk_kt,
    zeta_walk,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
