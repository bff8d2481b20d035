//! Invariant convex sets, their projections and cut oracles, and Dykstra's
//! method for intersections.

mod config;
mod constraint;
mod dykstra;

pub use config::{load_constraints, ConstraintConfig, ConstraintSpec};
pub use constraint::{ConstraintSet, Halfspace};
pub use dykstra::{
    dykstra_project, dykstra_project_warm, max_residual, DykstraState, ProjectionReport,
};
