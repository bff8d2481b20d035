//! ADMM for `min tr(CX)` subject to `tr(A_i X) = b_i`, `X ⪰ 0`, and
//! optional entrywise nonnegativity.
//!
//! The iterate is split into an affine copy `X`, a PSD copy `U`, and a
//! nonnegative copy `V`. The `X` step is a Euclidean projection onto the
//! affine set whose Gram matrix is factored once; the `U` and `V` steps are
//! cone projections. Scaled duals `W_u`, `W_v` enforce `X = U = V`.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::linalg::{eig_fast, project_psd};

/// Iterations between penalty rebalancing checks.
const RHO_UPDATE_PERIOD: usize = 25;
/// Residual ratio that triggers a penalty change.
const RHO_BALANCE_RATIO: f64 = 10.0;
/// Gram eigenvalues below this fraction of the largest are treated as zero.
const GRAM_PINV_RTOL: f64 = 1e-12;

/// A linear equality `<M, X> = rhs` with `M` symmetric and stored sparsely
/// by its upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    /// `(i, j, v)` with `i <= j`, sorted and without duplicates; the
    /// off-diagonal value `v` sits at both `(i, j)` and `(j, i)`.
    entries: Vec<(usize, usize, f64)>,
    pub rhs: f64,
}

impl LinearConstraint {
    /// Builds from loose triples, merging duplicates and mirroring entries
    /// below the diagonal.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, usize, f64)>, rhs: f64) -> Self {
        let mut e: Vec<(usize, usize, f64)> = entries
            .into_iter()
            .map(|(i, j, v)| if i <= j { (i, j, v) } else { (j, i, v) })
            .collect();
        e.sort_by_key(|a| (a.0, a.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(e.len());
        for (i, j, v) in e {
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (i, j) => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != 0.0);
        LinearConstraint {
            entries: merged,
            rhs,
        }
    }

    pub fn from_matrix(m: &SymMatrix, rhs: f64) -> Self {
        let n = m.n();
        let entries = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = m.get(i, j);
                (v != 0.0).then_some((i, j, v))
            });
        Self::from_entries(entries.collect::<Vec<_>>(), rhs)
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn to_matrix(&self, n: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(n);
        for &(i, j, v) in &self.entries {
            m.set(i, j, v);
        }
        m
    }

    /// `<M, X>` over the full matrix.
    pub fn apply(&self, x: &[f64], n: usize) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| {
                if i == j {
                    v * x[i * n + i]
                } else {
                    2.0 * v * x[i * n + j]
                }
            })
            .sum()
    }

    fn max_index(&self) -> Option<usize> {
        self.entries.iter().map(|&(_, j, _)| j).max()
    }
}

/// Which entries carry a nonnegativity constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NonnegMask {
    #[default]
    None,
    All,
    /// Entries whose row and column both lie in the last `k` indices.
    TrailingBlock(usize),
}

impl NonnegMask {
    fn applies(&self, n: usize, i: usize, j: usize) -> bool {
        match *self {
            NonnegMask::None => false,
            NonnegMask::All => true,
            NonnegMask::TrailingBlock(k) => i >= n - k && j >= n - k,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum EntryCone {
    Free,
    Nonneg,
    Zero,
}

/// `min tr(CX)` subject to the linear equalities and cone flags.
#[derive(Clone, Debug)]
pub struct ConicProblem {
    pub objective: SymMatrix,
    pub constraints: Vec<LinearConstraint>,
    pub psd: bool,
    pub nonnegative: NonnegMask,
    /// Entries known to vanish on the feasible set. They are pinned in the
    /// cone step; the affine constraints must already imply them.
    pub zero_entries: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct ConicSolution {
    pub x: SymMatrix,
    pub objective_value: f64,
    /// Relative consensus gap between the affine and cone copies.
    pub primal_residual: f64,
    /// Relative change of the cone copies, scaled by the penalty.
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ConicProblem {
    fn validate(&self) -> Result<()> {
        let n = self.objective.n();
        if self.constraints.is_empty() {
            return Err(Error::invalid(
                "conic problem needs at least one constraint",
            ));
        }
        for c in &self.constraints {
            if c.max_index().is_some_and(|j| j >= n) {
                return Err(Error::invalid("constraint index outside the variable"));
            }
        }
        if self.zero_entries.iter().any(|&(i, j)| i >= n || j >= n) {
            return Err(Error::invalid("zero entry outside the variable"));
        }
        if let NonnegMask::TrailingBlock(k) = self.nonnegative {
            if k > n {
                return Err(Error::invalid("nonnegative block larger than the variable"));
            }
        }
        if !self.objective.is_finite() {
            return Err(Error::invalid("non-finite objective"));
        }
        Ok(())
    }
}

/// Euclidean projection onto `{X : <A_i, X> = b_i}` via a pseudo-inverted
/// Gram matrix.
struct AffineProjector<'a> {
    constraints: &'a [LinearConstraint],
    n: usize,
    gram_pinv: Vec<f64>,
}

impl<'a> AffineProjector<'a> {
    fn new(constraints: &'a [LinearConstraint], n: usize) -> Result<Self> {
        let m = constraints.len();
        let mut gram = SymMatrix::zeros(m);
        let mut dense = vec![0.0; n * n];
        for (a, ca) in constraints.iter().enumerate() {
            for &(i, j, v) in &ca.entries {
                dense[i * n + j] = v;
                dense[j * n + i] = v;
            }
            for (b, cb) in constraints.iter().enumerate().skip(a) {
                gram.set(a, b, cb.apply(&dense, n));
            }
            for &(i, j, _) in &ca.entries {
                dense[i * n + j] = 0.0;
                dense[j * n + i] = 0.0;
            }
        }
        let ed = eig_fast(&gram)?;
        let cutoff = ed.values[0].abs() * GRAM_PINV_RTOL;
        let inv: Vec<f64> = ed
            .values
            .iter()
            .map(|&l| if l > cutoff { 1.0 / l } else { 0.0 })
            .collect();
        let gram_pinv = ed.reconstruct_with(&inv).as_slice().to_vec();
        Ok(AffineProjector {
            constraints,
            n,
            gram_pinv,
        })
    }

    fn project(&self, z: &mut [f64]) {
        let m = self.constraints.len();
        let r: Vec<f64> = self
            .constraints
            .iter()
            .map(|c| c.apply(z, self.n) - c.rhs)
            .collect();
        let n = self.n;
        for a in 0..m {
            let mu: f64 = self.gram_pinv[a * m..(a + 1) * m]
                .iter()
                .zip(&r)
                .map(|(g, ri)| g * ri)
                .sum();
            if mu == 0.0 {
                continue;
            }
            for &(i, j, v) in &self.constraints[a].entries {
                z[i * n + j] -= mu * v;
                if i != j {
                    z[j * n + i] -= mu * v;
                }
            }
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn diff_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn admm_solve(p: &ConicProblem, cfg: &SolverConfig) -> Result<ConicSolution> {
    admm_solve_with_tol(p, cfg, cfg.admm_tol)
}

pub(crate) fn admm_solve_with_tol(
    p: &ConicProblem,
    cfg: &SolverConfig,
    tol: f64,
) -> Result<ConicSolution> {
    p.validate()?;
    let n = p.objective.n();
    let nn = n * n;
    let c = p.objective.as_slice();
    let affine = AffineProjector::new(&p.constraints, n)?;
    let has_v = p.nonnegative != NonnegMask::None || !p.zero_entries.is_empty();
    let mut mask: Vec<EntryCone> = (0..nn)
        .map(|k| {
            if p.nonnegative.applies(n, k / n, k % n) {
                EntryCone::Nonneg
            } else {
                EntryCone::Free
            }
        })
        .collect();
    for &(i, j) in &p.zero_entries {
        mask[i * n + j] = EntryCone::Zero;
        mask[j * n + i] = EntryCone::Zero;
    }

    let mut rho = cfg.admm_rho0;
    let mut x = vec![0.0; nn];
    let mut u = vec![0.0; nn];
    let mut v = vec![0.0; nn];
    let mut wu = vec![0.0; nn];
    let mut wv = vec![0.0; nn];
    let mut z = vec![0.0; nn];
    let (mut rel_r, mut rel_s) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;

    for it in 1..=cfg.admm_max_iter {
        iterations = it;
        for k in 0..nn {
            z[k] = if has_v {
                0.5 * (u[k] - wu[k] + v[k] - wv[k]) - c[k] / (2.0 * rho)
            } else {
                u[k] - wu[k] - c[k] / rho
            };
        }
        affine.project(&mut z);
        std::mem::swap(&mut x, &mut z);

        let u_old = std::mem::take(&mut u);
        let shifted: Vec<f64> = x.iter().zip(&wu).map(|(a, b)| a + b).collect();
        u = if p.psd {
            project_psd(&SymMatrix::from_row_major(n, shifted))?
                .as_slice()
                .to_vec()
        } else {
            shifted
        };
        let mut dv = 0.0;
        let mut rv = 0.0;
        if has_v {
            for k in 0..nn {
                let t = x[k] + wv[k];
                let nv = match mask[k] {
                    EntryCone::Free => t,
                    EntryCone::Nonneg => t.max(0.0),
                    EntryCone::Zero => 0.0,
                };
                dv += (nv - v[k]) * (nv - v[k]);
                v[k] = nv;
            }
        }
        for k in 0..nn {
            wu[k] += x[k] - u[k];
            if has_v {
                wv[k] += x[k] - v[k];
                rv += (x[k] - v[k]) * (x[k] - v[k]);
            }
        }

        let r = (diff_sq(&x, &u) + rv).sqrt();
        let s = rho * (diff_sq(&u, &u_old) + dv).sqrt();
        let w_norm = (norm(&wu).powi(2) + if has_v { norm(&wv).powi(2) } else { 0.0 }).sqrt();
        rel_r = r / norm(&x).max(norm(&u)).max(1.0);
        rel_s = s / (rho * w_norm).max(1.0);
        if rel_r <= tol && rel_s <= tol {
            converged = true;
            break;
        }
        if it % RHO_UPDATE_PERIOD == 0 {
            let scale = if rel_r > RHO_BALANCE_RATIO * rel_s {
                2.0
            } else if rel_s > RHO_BALANCE_RATIO * rel_r {
                0.5
            } else {
                1.0
            };
            if scale != 1.0 {
                rho *= scale;
                for w in wu.iter_mut().chain(wv.iter_mut()) {
                    *w /= scale;
                }
            }
        }
    }

    let x = SymMatrix::from_row_major(n, x);
    Ok(ConicSolution {
        objective_value: x.dot(&p.objective),
        x,
        primal_residual: rel_r,
        dual_residual: rel_s,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_canonicalization() {
        let c = LinearConstraint::from_entries(vec![(1, 0, 1.0), (0, 1, 2.0), (2, 2, 0.0)], 5.0);
        assert_eq!(c.entries(), &[(0, 1, 3.0)]);
        let m = c.to_matrix(3);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(LinearConstraint::from_matrix(&m, 5.0), c);
        let x = SymMatrix::ones(3);
        assert_eq!(c.apply(x.as_slice(), 3), 6.0);
    }

    #[test]
    fn trace_minimization_2x2() {
        let p = ConicProblem {
            objective: SymMatrix::identity(2),
            constraints: vec![LinearConstraint::from_entries([(0, 0, 1.0)], 1.0)],
            psd: true,
            nonnegative: NonnegMask::None,
            zero_entries: vec![],
        };
        let s = admm_solve(&p, &SolverConfig::default()).unwrap();
        assert!(s.converged);
        assert!((s.objective_value - 1.0).abs() < 1e-5);
        let e11 = SymMatrix::from_diag(&[1.0, 0.0]);
        assert!(s.x.dist(&e11) < 1e-4);
    }

    #[test]
    fn rejects_empty_constraints() {
        let p = ConicProblem {
            objective: SymMatrix::identity(2),
            constraints: vec![],
            psd: true,
            nonnegative: NonnegMask::None,
            zero_entries: vec![],
        };
        assert!(admm_solve(&p, &SolverConfig::default()).is_err());
    }
}
