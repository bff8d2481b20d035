use serde::Serialize;

/// Outcome of one harness trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial_index: u64,
    pub seed: u64,
    /// Deconvolution: `‖Â1 - round01(Â1)‖_∞ <= 0.1` and, when ground truth is
    /// known, `round01(Â1)` equals it. Generation and testing: every
    /// projection reached the feasibility tolerance.
    pub success: bool,
    pub recovery_error_inf: f64,
    pub iterations: usize,
    pub elapsed_ms: u64,
    pub objective_value: f64,
    /// The driver met its own stopping rule (objective tolerance for
    /// deconvolution, feasible projections otherwise).
    pub converged: bool,
    /// Projection calls that hit the cycle cap.
    pub projection_failures: usize,
}

impl TrialReport {
    pub(crate) fn new(trial_index: u64, seed: u64) -> Self {
        TrialReport {
            trial_index,
            seed,
            success: false,
            recovery_error_inf: f64::NAN,
            iterations: 0,
            elapsed_ms: 0,
            objective_value: f64::NAN,
            converged: false,
            projection_failures: 0,
        }
    }
}
