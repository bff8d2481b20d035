//! Exact membership in the convex hull of all relabelings of a small graph.

use crate::error::{Error, Result};
use crate::graph::{conjugate, Permutation, SymMatrix};
use crate::linalg::project_simplex;

pub const HULL_MAX_NODES: usize = 5;
/// Points within this Frobenius distance of the hull count as inside.
pub const HULL_INSIDE_TOL: f64 = 1e-6;
/// Target for the Frank–Wolfe gap of the least-squares subproblem.
const HULL_GAP_TOL: f64 = 1e-9;
const HULL_MAX_ITER: usize = 200_000;

#[derive(Clone, Debug)]
pub struct HullMembership {
    pub inside: bool,
    /// Frobenius distance from `X` to the hull.
    pub distance: f64,
    /// Nearest point of the hull.
    pub projection: SymMatrix,
    /// Convex weights over the relabelings of `A` realizing `projection`.
    pub weights: Vec<f64>,
    /// `X - projection` when outside; `⟨P, X⟩` exceeds `⟨P, Y⟩` for every
    /// hull point `Y`, hence `Θ_P(X) > Θ_P(A)`.
    pub separator: Option<SymMatrix>,
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Decides whether `x` lies in the convex hull of `{ΠAΠ^T}`.
///
/// Solves `min_w ‖Σ w_k V_k - X‖` over the simplex by accelerated projected
/// gradient on the `n! x n!` Gram system, stopping when the Frank–Wolfe gap
/// is below `1e-9` (or `1e-9 * ‖X - proj‖²` when that is smaller).
pub fn hull_membership(a: &SymMatrix, x: &SymMatrix) -> Result<HullMembership> {
    let n = a.n();
    Error::check_dim(n, x.n())?;
    if n > HULL_MAX_NODES {
        return Err(Error::TooLarge {
            what: "hull_membership",
            size: n as u64,
            limit: HULL_MAX_NODES as u64,
            hint: "",
        });
    }
    let vertices: Vec<SymMatrix> = all_permutations(n)
        .into_iter()
        .map(|p| conjugate(a, &Permutation::new(p).expect("valid permutation")))
        .collect::<Result<_>>()?;
    let m = vertices.len();
    let gram: Vec<f64> = (0..m * m)
        .map(|k| vertices[k / m].dot(&vertices[k % m]))
        .collect();
    let h: Vec<f64> = vertices.iter().map(|v| v.dot(x)).collect();
    let lipschitz = (0..m)
        .map(|i| {
            gram[i * m..(i + 1) * m]
                .iter()
                .map(|g| g.abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let grad = |w: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|i| {
                gram[i * m..(i + 1) * m]
                    .iter()
                    .zip(w)
                    .map(|(g, wj)| g * wj)
                    .sum::<f64>()
                    - h[i]
            })
            .collect()
    };
    let combine = |w: &[f64]| {
        let mut p = SymMatrix::zeros(n);
        for (v, &wk) in vertices.iter().zip(w) {
            if wk != 0.0 {
                p.axpy(wk, v);
            }
        }
        p
    };

    let mut w = vec![1.0 / m as f64; m];
    let mut z = w.clone();
    let mut t = 1.0f64;
    for _ in 0..HULL_MAX_ITER {
        let g = grad(&z);
        let step: Vec<f64> = z
            .iter()
            .zip(&g)
            .map(|(zi, gi)| zi - gi / lipschitz)
            .collect();
        let w_next = project_simplex(&step);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = w_next
            .iter()
            .zip(&w)
            .map(|(a, b)| a + (t - 1.0) / t_next * (a - b))
            .collect();
        w = w_next;
        t = t_next;

        // Frank–Wolfe gap: max_k <X - proj, V_k> - <X - proj, proj>.
        let gw = grad(&w);
        let wg: f64 = w.iter().zip(&gw).map(|(a, b)| a * b).sum();
        let gmin = gw.iter().cloned().fold(f64::INFINITY, f64::min);
        let gap = wg - gmin;
        let dist_sq = {
            let p = combine(&w);
            p.dist(x).powi(2)
        };
        if gap
            <= HULL_GAP_TOL
                .min(HULL_GAP_TOL * dist_sq)
                .max(f64::EPSILON * lipschitz)
        {
            break;
        }
    }
    let projection = combine(&w);
    let distance = projection.dist(x);
    let inside = distance <= HULL_INSIDE_TOL;
    Ok(HullMembership {
        inside,
        distance,
        separator: (!inside).then(|| x - &projection),
        projection,
        weights: w,
    })
}
