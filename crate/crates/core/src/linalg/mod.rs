//! Symmetric eigendecomposition, majorization, and the vector and matrix
//! projections used by the solvers.

mod eigen;
mod majorization;

pub use eigen::{
    eig_sym, eig_sym_with, spectrum, EigenDecomposition, EigenMethod, JACOBI_MAX_SWEEPS, JACOBI_TOL,
};
pub use majorization::{
    distribution_function, majorization_violation, majorizes, monotone_functional,
    project_permutahedron, project_simplex, sorted_desc, SortedVector, MAJORIZATION_TOL,
};

use crate::error::Result;
use crate::graph::SymMatrix;

/// Fast-path decomposition used inside iterative solvers.
pub(crate) fn eig_fast(a: &SymMatrix) -> Result<EigenDecomposition> {
    eig_sym_with(a, EigenMethod::TridiagonalQl)
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn project_psd(a: &SymMatrix) -> Result<SymMatrix> {
    let ed = eig_fast(a)?;
    if ed.min_value() >= 0.0 {
        return Ok(a.clone());
    }
    let clamped: Vec<f64> = ed.values.iter().map(|&l| l.max(0.0)).collect();
    Ok(ed.reconstruct_with(&clamped))
}

pub fn lambda_min(a: &SymMatrix) -> Result<f64> {
    Ok(eig_fast(a)?.min_value())
}

/// Whether a Cholesky factorization of `a` succeeds with positive pivots.
/// Much cheaper than an eigendecomposition when only definiteness matters.
pub(crate) fn is_positive_definite(a: &SymMatrix) -> bool {
    let n = a.n();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    true
}
