use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::sets::constraint::CutCache;
use crate::sets::ConstraintSet;

#[derive(Clone, Debug)]
pub struct ProjectionReport {
    pub point: SymMatrix,
    pub cycles: usize,
    /// Largest [`ConstraintSet::residual`] at `point`.
    pub max_set_residual: f64,
    pub converged: bool,
}

/// Correction terms carried between Dykstra calls.
///
/// Dykstra's method is block coordinate ascent on the dual of the projection
/// problem and the corrections are its dual variables, so any previous set of
/// corrections is a valid starting point. Reusing them across nearby inputs
/// cuts the number of cycles sharply.
#[derive(Clone, Debug, Default)]
pub struct DykstraState {
    corrections: Vec<Option<SymMatrix>>,
    /// Recent cuts of each cut-based set.
    cuts: Vec<CutCache>,
}

impl DykstraState {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Dykstra's cyclic projection onto the intersection of `sets`.
///
/// Every set keeps its own correction term. Cut-based sets are projected
/// onto a polyhedral outer approximation assembled from their cuts, refined
/// until the result is feasible to within a small slack. Stops once every
/// residual is at most `cfg.feasibility_tol` and the point moved by at most
/// that much over the last cycle, or after `cfg.max_cycles` cycles with
/// `converged = false`.
pub fn dykstra_project(
    sets: &[ConstraintSet],
    x: &SymMatrix,
    cfg: &SolverConfig,
) -> Result<ProjectionReport> {
    dykstra_project_warm(sets, x, cfg, &mut DykstraState::new())
}

/// [`dykstra_project`] starting from, and updating, the corrections in `state`.
pub fn dykstra_project_warm(
    sets: &[ConstraintSet],
    x: &SymMatrix,
    cfg: &SolverConfig,
    state: &mut DykstraState,
) -> Result<ProjectionReport> {
    if sets.is_empty() {
        return Err(Error::invalid("projection needs at least one set"));
    }
    for s in sets {
        s.check_size(x.n())?;
    }
    if state.corrections.len() != sets.len()
        || state.corrections.iter().flatten().any(|c| c.n() != x.n())
    {
        state.corrections = vec![None; sets.len()];
        state.cuts = vec![CutCache::default(); sets.len()];
    }
    let DykstraState { corrections, cuts } = state;
    let mut point = x.clone();
    for c in corrections.iter().flatten() {
        point.axpy(-1.0, c);
    }
    let last = sets.len() - 1;
    let single_exact = last == 0 && !sets[0].is_cut_based();
    for cycle in 1..=cfg.max_cycles {
        let start = point.clone();
        let mut last_noop = false;
        for (k, ((set, corr), cache)) in sets
            .iter()
            .zip(corrections.iter_mut())
            .zip(cuts.iter_mut())
            .enumerate()
        {
            let shifted = match corr {
                Some(p) => &point + &*p,
                None => point.clone(),
            };
            let projected = if set.is_cut_based() {
                set.project_by_cuts(&shifted, cache)?
            } else {
                set.project(&shifted)?
            };
            let p = &shifted - &projected;
            last_noop = k == last && corr.is_none() && p.max_abs() == 0.0;
            *corr = (p.max_abs() > 0.0).then_some(p);
            point = projected;
        }
        if !single_exact && point.dist(&start) > cfg.feasibility_tol {
            continue;
        }
        // The set projected last holds `point` unless it is cut-based and
        // actually moved it.
        let skip_last = !sets[last].is_cut_based() || last_noop;
        let mut feasible = true;
        for (k, s) in sets.iter().enumerate() {
            if !(k == last && skip_last) && !s.within(&point, cfg.feasibility_tol)? {
                feasible = false;
                break;
            }
        }
        if feasible {
            return Ok(ProjectionReport {
                max_set_residual: max_residual(sets, &point)?,
                point,
                cycles: cycle,
                converged: true,
            });
        }
    }
    Ok(ProjectionReport {
        max_set_residual: max_residual(sets, &point)?,
        point,
        cycles: cfg.max_cycles,
        converged: false,
    })
}

pub fn max_residual(sets: &[ConstraintSet], x: &SymMatrix) -> Result<f64> {
    sets.iter()
        .try_fold(0.0f64, |m, s| Ok(m.max(s.residual(x)?)))
}
