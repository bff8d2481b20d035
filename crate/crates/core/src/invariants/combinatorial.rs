//! Exhaustive invariants: maximum cut, Cheeger constant, stability number.

use crate::error::{Error, Result};
use crate::graph::SymMatrix;

pub const MAXCUT_MAX_NODES: usize = 24;
pub const CHEEGER_MAX_NODES: usize = 20;
pub const STABILITY_MAX_NODES: usize = 24;

fn cap(what: &'static str, n: usize, limit: usize, hint: &'static str) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge {
            what,
            size: n as u64,
            limit: limit as u64,
            hint,
        });
    }
    Ok(())
}

/// Largest weighted cut, `max_y ¼ Σ A_ij (1 - y_i y_j)` over sign vectors.
///
/// Walks the `2^(n-1)` cuts with node `n-1` fixed in Gray-code order, so each
/// step flips one node and updates in `O(n)`.
pub fn maxcut_exact(a: &SymMatrix) -> Result<f64> {
    let n = a.n();
    cap(
        "maxcut_exact",
        n,
        MAXCUT_MAX_NODES,
        "; use maxcut_sdp for an upper bound",
    )?;
    if n == 1 {
        return Ok(0.0);
    }
    let mut y = vec![1.0; n];
    // s[k] = Σ_{j≠k} A_kj y_j
    let mut s: Vec<f64> = (0..n)
        .map(|k| (0..n).filter(|&j| j != k).map(|j| a.get(k, j)).sum())
        .collect();
    let mut cut = 0.0;
    let mut best: f64 = 0.0;
    for step in 1u64..(1u64 << (n - 1)) {
        let k = step.trailing_zeros() as usize;
        let yk = y[k];
        cut += yk * s[k];
        y[k] = -yk;
        for (j, sj) in s.iter_mut().enumerate() {
            if j != k {
                *sj -= 2.0 * a.get(j, k) * yk;
            }
        }
        best = best.max(cut);
    }
    Ok(best)
}

/// Cheeger constant: `min cut(U, U^c) / |U|` over nonempty `U` with
/// `|U| <= n/2`.
pub fn isoperimetric_exact(a: &SymMatrix) -> Result<f64> {
    let n = a.n();
    cap("isoperimetric_exact", n, CHEEGER_MAX_NODES, "")?;
    if n < 2 {
        return Err(Error::invalid("Cheeger constant needs at least two nodes"));
    }
    let deg: Vec<f64> = (0..n)
        .map(|k| (0..n).filter(|&j| j != k).map(|j| a.get(k, j)).sum())
        .collect();
    let mut in_u = vec![false; n];
    // t[k] = Σ_{j∈U, j≠k} A_kj
    let mut t = vec![0.0; n];
    let mut cut = 0.0;
    let mut size = 0usize;
    let mut best = f64::INFINITY;
    for step in 1u64..(1u64 << n) {
        let k = step.trailing_zeros() as usize;
        let sign = if in_u[k] { -1.0 } else { 1.0 };
        cut += sign * (deg[k] - 2.0 * t[k]);
        in_u[k] = !in_u[k];
        if in_u[k] {
            size += 1;
        } else {
            size -= 1;
        }
        for (j, tj) in t.iter_mut().enumerate() {
            if j != k {
                *tj += sign * a.get(j, k);
            }
        }
        if size >= 1 && 2 * size <= n {
            best = best.min(cut / size as f64);
        }
    }
    Ok(best)
}

/// Stability number of an unweighted graph by branch and bound.
pub fn stability_exact(a: &SymMatrix) -> Result<usize> {
    let n = a.n();
    if !a.is_unweighted() {
        return Err(Error::invalid("stability number needs an unweighted graph"));
    }
    cap(
        "stability_exact",
        n,
        STABILITY_MAX_NODES,
        "; use stability_sdp or motzkin_straus",
    )?;
    let nbrs: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| a.get(i, j) == 1.0)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let mut best = 0;
    branch(&nbrs, (1u32 << n) - 1, 0, &mut best);
    Ok(best)
}

fn branch(nbrs: &[u32], cand: u32, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    // Branch on the candidate of largest residual degree; an isolated one is
    // always taken.
    let mut v = 0;
    let mut vdeg = 0;
    let mut rest = cand;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (nbrs[u] & cand).count_ones();
        if d == 0 {
            return branch(nbrs, cand & !(1 << u), size + 1, best);
        }
        if d > vdeg {
            v = u;
            vdeg = d;
        }
    }
    branch(nbrs, cand & !(1 << v) & !nbrs[v], size + 1, best);
    branch(nbrs, cand & !(1 << v), size, best);
}
