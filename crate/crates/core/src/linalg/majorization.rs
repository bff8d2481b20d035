//! Sorting, majorization, and the projections built on them.
//!
//! Lorenz dominance of `x` over `y` is `majorizes(-y, -x)`; no separate
//! routine is provided.

use crate::error::{Error, Result};

/// Majorization comparisons use this absolute slack on partial sums.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// A vector sorted in nonincreasing order together with the sorting
/// permutation: `values[k] == x[perm[k]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedVector {
    pub values: Vec<f64>,
    pub perm: Vec<usize>,
}

impl SortedVector {
    /// Stable descending sort; ties keep their original index order.
    pub fn new(x: &[f64]) -> Self {
        let mut perm: Vec<usize> = (0..x.len()).collect();
        perm.sort_by(|&i, &j| x[j].total_cmp(&x[i]));
        SortedVector {
            values: perm.iter().map(|&i| x[i]).collect(),
            perm,
        }
    }

    /// Scatters `sorted` (in this vector's order) back to original positions.
    pub fn unsort(&self, sorted: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; sorted.len()];
        for (k, &i) in self.perm.iter().enumerate() {
            out[i] = sorted[k];
        }
        out
    }
}

pub fn sorted_desc(x: &[f64]) -> Vec<f64> {
    SortedVector::new(x).values
}

fn is_nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// `g_k(x)`: the sum of the `k` largest entries.
pub fn distribution_function(x: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > x.len() {
        return Err(Error::invalid(format!(
            "distribution function index {k} outside 1..={}",
            x.len()
        )));
    }
    Ok(sorted_desc(x)[..k].iter().sum())
}

/// `v^T x̄` for nonincreasing `v`, i.e. the largest value of `v^T Πx`.
pub fn monotone_functional(v: &[f64], x: &[f64]) -> Result<f64> {
    Error::check_dim(v.len(), x.len())?;
    if !is_nonincreasing(v) {
        return Err(Error::invalid(
            "monotone functional weights must be nonincreasing",
        ));
    }
    Ok(v.iter().zip(sorted_desc(x)).map(|(a, b)| a * b).sum())
}

/// Whether `x` majorizes `y`: every top-`k` partial sum of `x` dominates
/// that of `y` and the totals agree.
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    Error::check_dim(x.len(), y.len())?;
    let xs = sorted_desc(x);
    let ys = sorted_desc(y);
    let (mut sx, mut sy) = (0.0, 0.0);
    let n = x.len();
    for k in 0..n {
        sx += xs[k];
        sy += ys[k];
        if k + 1 < n && sx < sy - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok((sx - sy).abs() <= MAJORIZATION_TOL)
}

/// Largest violation of "`b` majorizes `x`": the worst positive prefix-sum
/// excess plus the absolute total mismatch.
pub fn majorization_violation(b: &[f64], x: &[f64]) -> f64 {
    let bs = sorted_desc(b);
    let xs = sorted_desc(x);
    let (mut sb, mut sx) = (0.0, 0.0);
    let mut worst: f64 = 0.0;
    let n = bs.len();
    for k in 0..n {
        sb += bs[k];
        sx += xs[k];
        if k + 1 < n {
            worst = worst.max(sx - sb);
        }
    }
    worst + (sx - sb).abs()
}

/// Nonincreasing isotonic regression by pooling adjacent violators.
fn isotonic_nonincreasing(u: &[f64]) -> Vec<f64> {
    // (sum, count) per block.
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(u.len());
    for &x in u {
        blocks.push((x, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 >= s1 / c1 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().unwrap() = (s0 + s1, c0 + c1);
        }
    }
    let mut out = Vec::with_capacity(u.len());
    for (s, c) in blocks {
        out.extend(std::iter::repeat_n(s / c as f64, c));
    }
    out
}

/// Euclidean projection of `x` onto the permutahedron of `b`, the set of
/// vectors majorized by `b`.
///
/// The projection is ordered like `x`, so in sorted coordinates it is
/// `x̄ - v` with `v` the nonincreasing isotonic fit of `x̄ - b̄`.
pub fn project_permutahedron(x: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    Error::check_dim(x.len(), b.len())?;
    let sx = SortedVector::new(x);
    let bs = sorted_desc(b);
    let u: Vec<f64> = sx.values.iter().zip(&bs).map(|(a, c)| a - c).collect();
    let v = isotonic_nonincreasing(&u);
    let y: Vec<f64> = sx.values.iter().zip(&v).map(|(a, c)| a - c).collect();
    Ok(sx.unsort(&y))
}

/// Euclidean projection onto `{x : x >= 0, sum(x) = 1}`.
pub fn project_simplex(x: &[f64]) -> Vec<f64> {
    if x.is_empty() {
        return Vec::new();
    }
    let u = sorted_desc(x);
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|&xi| (xi - theta).max(0.0)).collect()
}
