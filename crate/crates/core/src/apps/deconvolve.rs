use std::time::Instant;

use crate::apps::TrialReport;
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::sets::{dykstra_project_warm, ConstraintSet, DykstraState};

/// Entrywise distance below which a recovered weight counts as 0 or 1.
pub const RECOVERY_GATE: f64 = 0.1;
/// Lipschitz constant of the gradient of `½‖A - A1 - A2‖²` in `(A1, A2)`.
const STACKED_LIPSCHITZ: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct Deconvolution {
    pub a1: SymMatrix,
    pub a2: SymMatrix,
    pub report: TrialReport,
    /// Objective after each iteration.
    pub objective_history: Vec<f64>,
}

pub fn round01(x: &SymMatrix) -> SymMatrix {
    x.map(|v| if v >= 0.5 { 1.0 } else { 0.0 })
}

/// `‖X - round01(X)‖_∞`.
pub fn rounding_error(x: &SymMatrix) -> f64 {
    x.max_abs_diff(&round01(x))
}

/// Splits `A` into `A1 ∈ C1` and `A2 ∈ C2` by projected gradient on
/// `½‖A - A1 - A2‖_F²`.
///
/// Both blocks take a simultaneous step along the residual and are then
/// projected onto their set lists, starting from `A1 = A2 = A/2`. With
/// `cfg.momentum` the step is taken from an extrapolated point and only
/// accepted when it lowers the objective (monotone FISTA), so the recorded
/// objective never increases either way. Stops when the objective is at most
/// `cfg.objective_tol` or after `cfg.max_iter` iterations. With `truth`,
/// success also requires the rounded first block to equal it.
pub fn deconvolve(
    a: &SymMatrix,
    c1: &[ConstraintSet],
    c2: &[ConstraintSet],
    cfg: &SolverConfig,
    truth: Option<&SymMatrix>,
) -> Result<Deconvolution> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::invalid("deconvolution needs two nonempty set lists"));
    }
    if let Some(t) = truth {
        Error::check_dim(a.n(), t.n())?;
    }
    let start = Instant::now();
    let eta = cfg.step(STACKED_LIPSCHITZ);
    let objective = |a1: &SymMatrix, a2: &SymMatrix| {
        let r = &(a - a1) - a2;
        0.5 * r.dot(&r)
    };

    let mut a1 = a.scaled(0.5);
    let mut a2 = a.scaled(0.5);
    let mut report = TrialReport::new(0, 0);
    let mut history = Vec::new();
    // The split A/2 is not feasible, so the first projected step is always kept.
    let mut value = f64::INFINITY;
    let (mut y1, mut y2) = (a1.clone(), a2.clone());
    let mut t = 1.0f64;
    let (mut state1, mut state2) = (DykstraState::new(), DykstraState::new());
    for it in 1..=cfg.max_iter {
        let r = &(a - &y1) - &y2;
        let mut s1 = y1.clone();
        s1.axpy(eta, &r);
        let mut s2 = y2.clone();
        s2.axpy(eta, &r);
        let p1 = dykstra_project_warm(c1, &s1, cfg, &mut state1)?;
        let p2 = dykstra_project_warm(c2, &s2, cfg, &mut state2)?;
        report.projection_failures += usize::from(!p1.converged) + usize::from(!p2.converged);
        let (z1, z2) = (p1.point, p2.point);
        let candidate = objective(&z1, &z2);
        if cfg.momentum {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let (prev1, prev2) = (a1, a2);
            if candidate <= value {
                a1 = z1.clone();
                a2 = z2.clone();
                value = candidate;
            } else {
                a1 = prev1.clone();
                a2 = prev2.clone();
            }
            // y = x + (t/t')(z - x) + ((t - 1)/t')(x - x_prev)
            let (b1, b2) = (t / t_next, (t - 1.0) / t_next);
            y1 = &a1 + &(&(&z1 - &a1).scaled(b1) + &(&a1 - &prev1).scaled(b2));
            y2 = &a2 + &(&(&z2 - &a2).scaled(b1) + &(&a2 - &prev2).scaled(b2));
            t = t_next;
        } else {
            a1 = z1;
            a2 = z2;
            value = candidate;
            y1 = a1.clone();
            y2 = a2.clone();
        }
        history.push(value);
        report.iterations = it;
        if value <= cfg.objective_tol {
            report.converged = true;
            break;
        }
    }

    report.objective_value = value;
    report.recovery_error_inf = rounding_error(&a1);
    report.success =
        report.recovery_error_inf <= RECOVERY_GATE && truth.is_none_or(|t| round01(&a1) == *t);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(Deconvolution {
        a1,
        a2,
        report,
        objective_history: history,
    })
}
