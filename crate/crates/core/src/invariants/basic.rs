use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::linalg::{eig_fast, monotone_functional, sorted_desc, spectrum};

/// Row sums of the adjacency matrix in nonincreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSequence {
    pub sorted: Vec<f64>,
}

pub fn degree_sequence(a: &SymMatrix) -> DegreeSequence {
    DegreeSequence {
        sorted: sorted_desc(&a.row_sums()),
    }
}

/// Sum of the edge weights, `Σ_{i<j} A_ij`.
pub fn edge_sum(a: &SymMatrix) -> f64 {
    (a.sum() - a.trace()) / 2.0
}

/// Largest weighted degree, ignoring node weights.
pub fn max_degree(a: &SymMatrix) -> f64 {
    a.row_sums()
        .iter()
        .zip(a.diagonal())
        .map(|(r, d)| r - d)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn max_abs_node_weight(a: &SymMatrix) -> f64 {
    a.diagonal().iter().fold(0.0, |m, d| m.max(d.abs()))
}

pub fn node_weight_sum(a: &SymMatrix) -> f64 {
    a.trace()
}

/// `v^T λ(A)` for nonincreasing `v`.
pub fn spectral_functional(v: &[f64], a: &SymMatrix) -> Result<f64> {
    monotone_functional(v, &spectrum(a)?)
}

/// `v^T d(A)` for nonincreasing `v`.
pub fn degree_functional(v: &[f64], a: &SymMatrix) -> Result<f64> {
    monotone_functional(v, &a.row_sums())
}

/// `L_A = diag(A1) - A`.
pub fn laplacian(a: &SymMatrix) -> SymMatrix {
    let d = a.row_sums();
    let mut l = a.scaled(-1.0);
    for (i, di) in d.iter().enumerate() {
        l.set(i, i, di - a.get(i, i));
    }
    l
}

/// Second-smallest Laplacian eigenvalue; positive exactly when the graph is
/// connected. Defined for nonnegative weights only.
pub fn fiedler_value(a: &SymMatrix) -> Result<f64> {
    if a.as_slice().iter().any(|&v| v < 0.0) {
        return Err(Error::invalid("Fiedler value needs nonnegative weights"));
    }
    if a.n() < 2 {
        return Err(Error::invalid("Fiedler value needs at least two nodes"));
    }
    let ed = eig_fast(&laplacian(a))?;
    Ok(ed.values[a.n() - 2])
}
