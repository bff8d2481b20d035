//! Graph invariants: degree and spectral functionals, exhaustive
//! combinatorial invariants, the Motzkin–Straus program, and elementary
//! invariants `Θ_P` with their spectral relaxation.

mod basic;
mod combinatorial;
mod motzkin;
mod theta;

pub use basic::{
    degree_functional, degree_sequence, edge_sum, fiedler_value, laplacian, max_abs_node_weight,
    max_degree, node_weight_sum, spectral_functional, DegreeSequence,
};
pub use combinatorial::{
    isoperimetric_exact, maxcut_exact, stability_exact, CHEEGER_MAX_NODES, MAXCUT_MAX_NODES,
    STABILITY_MAX_NODES,
};
pub use motzkin::{motzkin_straus, MotzkinStraus, MOTZKIN_GRAD_TOL, MOTZKIN_MAX_ITER};
pub use theta::{
    lambda_bound, theta_exact, PatternSupport, ThetaValue, THETA_MAX_FULL, THETA_MAX_PLACEMENTS,
    THETA_MAX_SUPPORT,
};
