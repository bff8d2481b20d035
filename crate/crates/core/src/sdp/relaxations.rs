use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::linalg::{eig_fast, lambda_min};
use crate::sdp::admm::{
    admm_solve, admm_solve_with_tol, ConicProblem, ConicSolution, LinearConstraint, NonnegMask,
};

/// Largest graph accepted by [`qap_sdp`]; the lifted variable has
/// `n^2 + 1` rows.
pub const QAP_SDP_MAX_NODES: usize = 10;
/// `σ2/σ1` below this marks the lifted optimum as rank one.
pub const RANK_ONE_RATIO: f64 = 1e-6;
/// Certificate inequalities are checked with this slack.
pub const CERTIFICATE_TOL: f64 = 1e-7;
/// Residual target for the certificate solve, tighter than the default so
/// the repaired certificate loses little value.
const CERTIFICATE_ADMM_TOL: f64 = 1e-11;

/// Optimal value of a relaxation with the solver record behind it.
#[derive(Clone, Debug)]
pub struct SdpValue {
    pub value: f64,
    pub solution: ConicSolution,
}

impl SdpValue {
    pub fn converged(&self) -> bool {
        self.solution.converged
    }
}

/// `f(A) = min tr(XA)` over correlation matrices (`X_ii = 1`, `X ⪰ 0`).
/// `¼(1^T A 1 - f(A))` bounds the maximum cut from above.
pub fn maxcut_sdp(a: &SymMatrix, cfg: &SolverConfig) -> Result<SdpValue> {
    let n = a.n();
    let p = ConicProblem {
        objective: a.clone(),
        constraints: (0..n)
            .map(|i| LinearConstraint::from_entries([(i, i, 1.0)], 1.0))
            .collect(),
        psd: true,
        nonnegative: NonnegMask::None,
        zero_entries: vec![],
    };
    let solution = admm_solve(&p, cfg)?;
    Ok(SdpValue {
        value: solution.objective_value,
        solution,
    })
}

/// The cut bound `¼(1^T A 1 - f(A))`.
pub fn maxcut_upper_bound(a: &SymMatrix, f: f64) -> f64 {
    0.25 * (a.sum() - f)
}

/// `min tr(X(I + A))` over `X ⪰ 0`, `X >= 0`, `1^T X 1 = 1`; a lower
/// bound on the Motzkin–Straus value.
pub fn stability_sdp(a: &SymMatrix, cfg: &SolverConfig) -> Result<SdpValue> {
    let n = a.n();
    let mut c = a.clone();
    for i in 0..n {
        c.set(i, i, a.get(i, i) + 1.0);
    }
    let p = ConicProblem {
        objective: c,
        constraints: vec![LinearConstraint::from_matrix(&SymMatrix::ones(n), 1.0)],
        psd: true,
        nonnegative: NonnegMask::All,
        zero_entries: vec![],
    };
    let solution = admm_solve(&p, cfg)?;
    Ok(SdpValue {
        value: solution.objective_value,
        solution,
    })
}

#[derive(Clone, Debug)]
pub struct QapBound {
    /// Upper bound `Ω_P(A) >= Θ_P(A)`.
    pub value: f64,
    /// The lifted optimum is numerically rank one, so the bound is tight.
    pub rank_one: bool,
    pub singular_ratio: f64,
    pub solution: ConicSolution,
}

/// Lifted relaxation of `max_Π tr(PΠAΠ^T)`.
///
/// With `x = vec(Π)` (columns stacked, `x[i + n*a] = Π_ia`) the objective is
/// `x^T (A ⊗ P) x`. The variable is `Z = [[1, y^T], [y, Y]] ⪰ 0` with
/// `Y >= 0`, zero "gangster" entries (`Π_ia Π_ja` and `Π_ia Π_ib`), and
/// `tr(Y) - 2 y^T 1 = -n`.
pub fn qap_sdp(p: &SymMatrix, a: &SymMatrix, cfg: &SolverConfig) -> Result<QapBound> {
    let n = a.n();
    Error::check_dim(n, p.n())?;
    if n > QAP_SDP_MAX_NODES {
        return Err(Error::TooLarge {
            what: "qap_sdp",
            size: n as u64,
            limit: QAP_SDP_MAX_NODES as u64,
            hint: "; use lambda_bound instead",
        });
    }
    let dim = n * n + 1;
    let idx = |i: usize, col: usize| 1 + i + n * col;

    let mut objective = SymMatrix::zeros(dim);
    for ca in 0..n {
        for cb in 0..n {
            for i in 0..n {
                for j in 0..n {
                    objective.set(idx(i, ca), idx(j, cb), -a.get(ca, cb) * p.get(i, j));
                }
            }
        }
    }

    let mut gangster = Vec::new();
    for col in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                // Two rows in one column, and one row in two columns.
                gangster.push((idx(i, col), idx(j, col), 1.0));
                gangster.push((idx(col, i), idx(col, j), 1.0));
            }
        }
    }
    let trace_link = (1..dim)
        .map(|k| (k, k, 1.0))
        .chain((1..dim).map(|k| (0, k, -1.0)));
    // With Y >= 0 the zero-sum gangster constraint forces every listed
    // entry to vanish; pinning them in the cone step is the same set.
    let zero_entries = gangster.iter().map(|&(i, j, _)| (i, j)).collect();
    let constraints = vec![
        LinearConstraint::from_entries([(0, 0, 1.0)], 1.0),
        LinearConstraint::from_entries(gangster, 0.0),
        LinearConstraint::from_entries(trace_link.collect::<Vec<_>>(), -(n as f64)),
    ];
    let problem = ConicProblem {
        objective,
        constraints,
        psd: true,
        nonnegative: NonnegMask::TrailingBlock(n * n),
        zero_entries,
    };
    let solution = admm_solve(&problem, cfg)?;
    let ed = eig_fast(&solution.x)?;
    let s1 = ed.values[0].abs().max(f64::MIN_POSITIVE);
    let singular_ratio = ed.values.get(1).map_or(0.0, |s2| s2.abs() / s1);
    Ok(QapBound {
        value: -solution.objective_value,
        rank_one: singular_ratio < RANK_ONE_RATIO,
        singular_ratio,
        solution,
    })
}

/// Dual certificate for `f(A) >= alpha`: a vector `y` with
/// `A - diag(y) ⪰ 0` and `Σ y >= alpha`, or `None` when none was found.
///
/// Solves `max Σ y` in the equivalent form `min tr(S)` with `S ⪰ 0` and
/// `S_ij = A_ij` off the diagonal, then `y = diag(A) - diag(S)`, shifted down
/// by any residual negative eigenvalue so the PSD condition holds exactly up
/// to rounding.
pub fn maxcut_dual_certificate(
    a: &SymMatrix,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<Option<Vec<f64>>> {
    let n = a.n();
    let mut constraints: Vec<LinearConstraint> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            // <E, S> = 2 * 0.5 * S_ij
            constraints.push(LinearConstraint::from_entries([(i, j, 0.5)], a.get(i, j)));
        }
    }
    let y = if constraints.is_empty() {
        // One node: the certificate is y = A_00.
        vec![a.get(0, 0)]
    } else {
        let p = ConicProblem {
            objective: SymMatrix::identity(n),
            constraints,
            psd: true,
            nonnegative: NonnegMask::None,
            zero_entries: vec![],
        };
        let tol = CERTIFICATE_ADMM_TOL.min(cfg.admm_tol);
        let s = admm_solve_with_tol(&p, cfg, tol)?;
        (0..n).map(|i| a.get(i, i) - s.x.get(i, i)).collect()
    };
    let y = repair_certificate(a, y)?;
    let (total, lmin) = certificate_quality(a, &y)?;
    if total >= alpha - CERTIFICATE_TOL && lmin >= -CERTIFICATE_TOL {
        Ok(Some(y))
    } else {
        Ok(None)
    }
}

fn shifted(a: &SymMatrix, y: &[f64]) -> SymMatrix {
    let mut s = a.clone();
    for (i, yi) in y.iter().enumerate() {
        s.set(i, i, a.get(i, i) - yi);
    }
    s
}

fn repair_certificate(a: &SymMatrix, mut y: Vec<f64>) -> Result<Vec<f64>> {
    let lmin = lambda_min(&shifted(a, &y))?;
    if lmin < 0.0 {
        for yi in &mut y {
            *yi += lmin;
        }
    }
    Ok(y)
}

/// `(Σ y, λ_min(A - diag(y)))`.
pub fn certificate_quality(a: &SymMatrix, y: &[f64]) -> Result<(f64, f64)> {
    Error::check_dim(a.n(), y.len())?;
    Ok((y.iter().sum(), lambda_min(&shifted(a, y))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, cycle};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn maxcut_single_edge() {
        let f = maxcut_sdp(&clique(2), &cfg()).unwrap();
        assert!(f.converged());
        assert!((f.value + 2.0).abs() < 1e-5);
        assert!((maxcut_upper_bound(&clique(2), f.value) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn maxcut_four_cycle_is_tight() {
        let f = maxcut_sdp(&cycle(4), &cfg()).unwrap();
        assert!((maxcut_upper_bound(&cycle(4), f.value) - 4.0).abs() < 1e-5);
    }

    #[test]
    fn maxcut_triangle() {
        let f = maxcut_sdp(&clique(3), &cfg()).unwrap();
        assert!((f.value + 3.0).abs() < 1e-5);
    }

    #[test]
    fn stability_empty_graph() {
        let s = stability_sdp(&SymMatrix::zeros(4), &cfg()).unwrap();
        assert!((s.value - 0.25).abs() < 1e-5);
    }

    #[test]
    fn qap_zero_pattern() {
        let q = qap_sdp(&SymMatrix::zeros(3), &cycle(3), &cfg()).unwrap();
        assert!(q.value.abs() < 1e-9);
        assert!(qap_sdp(&SymMatrix::zeros(11), &clique(11), &cfg()).is_err());
    }

    #[test]
    fn certificates() {
        let y = maxcut_dual_certificate(&SymMatrix::identity(3), 3.0, &cfg())
            .unwrap()
            .unwrap();
        for v in y {
            assert!((v - 1.0).abs() < 1e-7);
        }
        let y = maxcut_dual_certificate(&clique(2), -2.0, &cfg())
            .unwrap()
            .unwrap();
        let (total, lmin) = certificate_quality(&clique(2), &y).unwrap();
        assert!(total >= -2.0 - 1e-7 && lmin >= -1e-7);
        assert!(maxcut_dual_certificate(&clique(2), -1.9, &cfg())
            .unwrap()
            .is_none());
    }
}
