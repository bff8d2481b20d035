use crate::graph::{RngStream, SymMatrix};
use crate::linalg::project_simplex;

pub const MOTZKIN_MAX_ITER: usize = 2000;
pub const MOTZKIN_GRAD_TOL: f64 = 1e-10;

/// Best point found for `min x^T (I + A) x` over the simplex.
#[derive(Clone, Debug)]
pub struct MotzkinStraus {
    /// Upper bound on the global minimum; `1/α` for unweighted graphs when
    /// the search succeeds.
    pub value: f64,
    pub minimizer: Vec<f64>,
    /// Number of starting points tried (random plus vertex starts).
    pub starts: usize,
}

/// Multi-start projected gradient for the Motzkin–Straus program.
///
/// Each local solution is followed by a rounding step: the nodes ranked by
/// weight are greedily collected into a set with no edges between them, and
/// the uniform distribution on that set is evaluated too. That candidate is
/// feasible, so the result stays an upper bound.
pub fn motzkin_straus(a: &SymMatrix, restarts: usize, rng: &mut RngStream) -> MotzkinStraus {
    let n = a.n();
    let mut q = a.clone();
    for i in 0..n {
        q.set(i, i, a.get(i, i) + 1.0);
    }
    let step = 1.0 / (2.0 * q.frobenius_norm().max(f64::MIN_POSITIVE));

    let mut starts: Vec<Vec<f64>> = (0..restarts)
        .map(|_| {
            let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.uniform()).ln()).collect();
            let s: f64 = e.iter().sum();
            e.iter().map(|v| v / s).collect()
        })
        .collect();
    starts.extend((0..n).map(|i| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    }));

    let mut best = MotzkinStraus {
        value: f64::INFINITY,
        minimizer: vec![1.0 / n as f64; n],
        starts: starts.len(),
    };
    let mut consider = |x: Vec<f64>| {
        let v = q.quad_form(&x);
        if v < best.value {
            best.value = v;
            best.minimizer = x;
        }
    };
    for x0 in starts {
        let x = descend(&q, x0, step);
        let rounded = round_to_stable(a, &x);
        consider(x);
        consider(rounded);
    }
    best
}

fn descend(q: &SymMatrix, mut x: Vec<f64>, step: f64) -> Vec<f64> {
    for _ in 0..MOTZKIN_MAX_ITER {
        let g = q.mul_vec(&x);
        let trial: Vec<f64> = x
            .iter()
            .zip(&g)
            .map(|(xi, gi)| xi - 2.0 * step * gi)
            .collect();
        let next = project_simplex(&trial);
        let moved: f64 = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        x = next;
        if moved / step < MOTZKIN_GRAD_TOL {
            break;
        }
    }
    x
}

fn round_to_stable(a: &SymMatrix, x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[j].total_cmp(&x[i]));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&j| a.get(i, j) == 0.0) {
            chosen.push(i);
        }
    }
    let mut out = vec![0.0; x.len()];
    for &i in &chosen {
        out[i] = 1.0 / chosen.len() as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, cycle};

    #[test]
    fn closed_form_cases() {
        let mut rng = RngStream::new(1);
        assert!((motzkin_straus(&clique(5), 10, &mut rng).value - 1.0).abs() < 1e-12);
        assert!((motzkin_straus(&SymMatrix::zeros(4), 10, &mut rng).value - 0.25).abs() < 1e-12);
        let c5 = motzkin_straus(&cycle(5), 50, &mut rng);
        assert!((c5.value - 0.5).abs() < 1e-6);
        assert_eq!(c5.starts, 55);
    }
}
