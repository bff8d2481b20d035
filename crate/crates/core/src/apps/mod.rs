//! Drivers built on invariant convex sets: deconvolution of a sum of two
//! graphs, constrained random generation, two-family hypothesis testing,
//! and an exact convex-hull membership oracle for tiny graphs.

mod deconvolve;
mod generate;
mod hull;
mod hypothesis;
mod report;

pub use deconvolve::{deconvolve, round01, rounding_error, Deconvolution, RECOVERY_GATE};
pub use generate::{
    constraint_activity, generate, projected_ascent, Ascent, ConstraintActivity, Generated,
    ACTIVITY_TOL,
};
pub use hull::{hull_membership, HullMembership, HULL_INSIDE_TOL, HULL_MAX_NODES};
pub use hypothesis::{hypothesis_test, HypothesisOutcome, TIE_TOL};
pub use report::TrialReport;
