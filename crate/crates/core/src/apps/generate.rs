use std::time::Instant;

use serde::Serialize;

use crate::apps::TrialReport;
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::{gaussian_symmetric, RngStream, SymMatrix};
use crate::sets::{dykstra_project_warm, ConstraintSet, DykstraState};

/// A constraint counts as active (equalities: satisfied) within this slack.
pub const ACTIVITY_TOL: f64 = 1e-6;

/// State of one constraint at the returned point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintActivity {
    pub kind: &'static str,
    pub residual: f64,
    /// Inequality slack, positive strictly inside.
    pub slack: Option<f64>,
    /// Equalities: residual within [`ACTIVITY_TOL`]. Inequalities: slack
    /// within it, i.e. the constraint is tight.
    pub active: bool,
}

pub fn constraint_activity(
    sets: &[ConstraintSet],
    x: &SymMatrix,
) -> Result<Vec<ConstraintActivity>> {
    sets.iter()
        .map(|s| {
            let residual = s.residual(x)?;
            let slack = s.slack(x)?;
            let active = match slack {
                Some(sl) => sl.abs() <= ACTIVITY_TOL,
                None => residual <= ACTIVITY_TOL,
            };
            Ok(ConstraintActivity {
                kind: s.kind(),
                residual,
                slack,
                active,
            })
        })
        .collect()
}

/// Result of projected ascent on a linear functional.
#[derive(Clone, Debug)]
pub struct Ascent {
    pub point: SymMatrix,
    /// `tr(F · point)` for the functional `F`.
    pub value: f64,
    pub iterations: usize,
    pub projection_failures: usize,
    /// Dykstra cycles summed over all projections.
    pub dykstra_cycles: usize,
    /// Residual of the final projection.
    pub final_residual: f64,
    pub final_converged: bool,
}

/// Maximizes `tr(F X)` over the intersection of `sets` by
/// `X <- proj(X + ηF)` with `η = cfg.ascent_step / ‖F‖_F`, starting from the
/// projection of the zero matrix. Consecutive projections share Dykstra
/// corrections.
pub fn projected_ascent(
    sets: &[ConstraintSet],
    functional: &SymMatrix,
    cfg: &SolverConfig,
) -> Result<Ascent> {
    let n = functional.n();
    let norm = functional.frobenius_norm();
    let eta = if norm > 0.0 {
        cfg.ascent_step / norm
    } else {
        0.0
    };
    let mut state = DykstraState::new();
    let first = dykstra_project_warm(sets, &SymMatrix::zeros(n), cfg, &mut state)?;
    let mut failures = usize::from(!first.converged);
    let mut cycles = first.cycles;
    let mut x = first.point;
    let mut last = (first.max_set_residual, first.converged);
    let mut value = functional.dot(&x);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..cfg.ascent_iter {
        let mut step = y.clone();
        step.axpy(eta, functional);
        let p = dykstra_project_warm(sets, &step, cfg, &mut state)?;
        failures += usize::from(!p.converged);
        cycles += p.cycles;
        last = (p.max_set_residual, p.converged);
        let z = p.point;
        let candidate = functional.dot(&z);
        if cfg.momentum {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let prev = x;
            if candidate >= value {
                x = z.clone();
                value = candidate;
            } else {
                x = prev.clone();
            }
            let drift = &(&z - &x).scaled(t / t_next) + &(&x - &prev).scaled((t - 1.0) / t_next);
            y = &x + &drift;
            t = t_next;
        } else {
            x = z;
            value = candidate;
            y = x.clone();
        }
    }
    Ok(Ascent {
        value: functional.dot(&x),
        point: x,
        iterations: cfg.ascent_iter,
        projection_failures: failures,
        dykstra_cycles: cycles,
        final_residual: last.0,
        final_converged: last.1,
    })
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: SymMatrix,
    /// The random functional that was maximized.
    pub functional: SymMatrix,
    pub activity: Vec<ConstraintActivity>,
    pub report: TrialReport,
}

/// Samples a point of `sets` by maximizing a random Gaussian functional.
///
/// The functional has i.i.d. standard normal entries on the upper triangle
/// (the diagonal too unless `cfg.gaussian_diagonal` is off).
pub fn generate(
    sets: &[ConstraintSet],
    n: usize,
    rng: &mut RngStream,
    cfg: &SolverConfig,
) -> Result<Generated> {
    if sets.is_empty() {
        return Err(Error::invalid("generation needs at least one set"));
    }
    let start = Instant::now();
    let m = gaussian_symmetric(rng, n, cfg.gaussian_diagonal);
    let ascent = projected_ascent(sets, &m, cfg)?;
    let activity = constraint_activity(sets, &ascent.point)?;
    let mut report = TrialReport::new(0, rng.seed());
    report.iterations = ascent.iterations;
    report.objective_value = ascent.value;
    report.projection_failures = ascent.projection_failures;
    report.converged = ascent.final_converged;
    report.success = ascent.final_converged;
    report.recovery_error_inf = ascent.final_residual;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(Generated {
        graph: ascent.point,
        functional: m,
        activity,
        report,
    })
}
