//! Semidefinite relaxations solved by a first-order conic method.

mod admm;
mod relaxations;

pub use admm::{admm_solve, ConicProblem, ConicSolution, LinearConstraint, NonnegMask};
pub use relaxations::{
    certificate_quality, maxcut_dual_certificate, maxcut_sdp, maxcut_upper_bound, qap_sdp,
    stability_sdp, QapBound, SdpValue, CERTIFICATE_TOL, QAP_SDP_MAX_NODES, RANK_ONE_RATIO,
};
