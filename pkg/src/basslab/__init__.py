"""Discrete Bass diffusion on directed weighted networks.

Exact adoption curves for 1D structures (circles, lines, circle-with-ray),
a full master-equation oracle for small networks, event-driven and
discrete-time simulation with coupling, and structural verification of
edge-indifference and parameter-monotonicity principles.
"""
from .analytic import (
    CircleCoefficients,
    DegenerateParameters,
    SurvivalSeries,
    alpha_diag,
    beta_diag,
    circle_coefficients,
    default_time_grid,
    diagnostics_alpha_beta_gamma_nu_psi,
    f_circle,
    f_hybrid,
    f_line_one_sided,
    f_line_two_sided,
    f_line_two_sided_quadrature,
    f_one_dim_limit,
    gamma_diag,
    nu_diag,
    nu_from_node_survivals,
    pair_survival_two_sided_line,
    psi_diag,
    s_k_shift_identity,
    survival_circle,
    survival_circle_closed_form,
    survival_circle_ode,
)
from .curves import AdoptionCurve, read_curve_csv, write_curve_csv
from .network import (
    Dominance,
    Network,
    add_edges,
    build_circle,
    build_grid,
    build_hybrid_circle_ray,
    build_line,
    dominates,
    remove_edges,
    weakly_dominates,
)
from .oracle import (
    MarginalReport,
    MasterSolution,
    StateDistribution,
    exact_f,
    exact_marginals,
    marginal_report,
    solve_master,
    survival,
)
from .principles import (
    EdgeClassification,
    PlanCase,
    TransformPlan,
    apply_transform,
    classify_edge,
    corollary_monotonicity_suite,
    dominance_pairs,
    figure_plan,
    non_influential_edges,
    oracle_dominance_report,
    verify_indifference,
)
from .simulator import (
    ConstantTape,
    CouplingTape,
    SimConfig,
    Trajectory,
    curve_from_trajectories,
    event_trajectories,
    run_coupled,
    run_discrete,
    run_event_driven,
)

__version__ = "0.1.0"

__all__ = [
    "AdoptionCurve",
    "CircleCoefficients",
    "ConstantTape",
    "CouplingTape",
    "DegenerateParameters",
    "Dominance",
    "EdgeClassification",
    "MarginalReport",
    "MasterSolution",
    "Network",
    "PlanCase",
    "SimConfig",
    "StateDistribution",
    "SurvivalSeries",
    "Trajectory",
    "TransformPlan",
    "add_edges",
    "alpha_diag",
    "apply_transform",
    "beta_diag",
    "build_circle",
    "build_grid",
    "build_hybrid_circle_ray",
    "build_line",
    "circle_coefficients",
    "classify_edge",
    "corollary_monotonicity_suite",
    "curve_from_trajectories",
    "default_time_grid",
    "diagnostics_alpha_beta_gamma_nu_psi",
    "dominance_pairs",
    "dominates",
    "event_trajectories",
    "exact_f",
    "exact_marginals",
    "f_circle",
    "f_hybrid",
    "f_line_one_sided",
    "f_line_two_sided",
    "f_line_two_sided_quadrature",
    "f_one_dim_limit",
    "figure_plan",
    "gamma_diag",
    "marginal_report",
    "non_influential_edges",
    "nu_diag",
    "nu_from_node_survivals",
    "oracle_dominance_report",
    "pair_survival_two_sided_line",
    "psi_diag",
    "read_curve_csv",
    "remove_edges",
    "run_coupled",
    "run_discrete",
    "run_event_driven",
    "s_k_shift_identity",
    "solve_master",
    "survival",
    "survival_circle",
    "survival_circle_closed_form",
    "survival_circle_ode",
    "verify_indifference",
    "weakly_dominates",
    "write_curve_csv",
]
