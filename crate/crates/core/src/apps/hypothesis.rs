use crate::apps::generate::projected_ascent;
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::sets::ConstraintSet;

/// Scores closer than this are reported as a tie.
pub const TIE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct HypothesisOutcome {
    /// 1 when `score1 >= score2`, else 2.
    pub winner: u8,
    pub tie: bool,
    pub score1: f64,
    pub score2: f64,
    /// Maximizers of `tr(A M)` over each family; they approximate `A`
    /// within that family.
    pub m1: SymMatrix,
    pub m2: SymMatrix,
    pub converged: bool,
}

/// Declares family 1 closer to `A` when
/// `max_{M ∈ C1} tr(AM) >= max_{M ∈ C2} tr(AM)`.
pub fn hypothesis_test(
    a: &SymMatrix,
    c1: &[ConstraintSet],
    c2: &[ConstraintSet],
    cfg: &SolverConfig,
) -> Result<HypothesisOutcome> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::invalid(
            "hypothesis test needs two nonempty families",
        ));
    }
    let r1 = projected_ascent(c1, a, cfg)?;
    let r2 = projected_ascent(c2, a, cfg)?;
    let tie = (r1.value - r2.value).abs() <= TIE_TOL;
    Ok(HypothesisOutcome {
        winner: if r1.value >= r2.value { 1 } else { 2 },
        tie,
        score1: r1.value,
        score2: r2.value,
        converged: r1.final_converged && r2.final_converged,
        m1: r1.point,
        m2: r2.point,
    })
}
