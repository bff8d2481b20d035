//! Elementary invariants `Θ_P(A) = max_Π tr(P Π A Π^T)` by enumeration, and
//! the spectral upper bound `Λ_P(A) = λ(P)^T λ(A)`.

use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::linalg::spectrum;

/// Largest support for partial enumeration.
pub const THETA_MAX_SUPPORT: usize = 6;
/// Largest `n^k` for partial enumeration.
pub const THETA_MAX_PLACEMENTS: u64 = 100_000_000;
/// Largest `n` for full `n!` enumeration when the pattern has full support.
pub const THETA_MAX_FULL: usize = 10;

/// A pattern together with the nodes it touches.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternSupport {
    pub pattern: SymMatrix,
    /// Nodes of `pattern` with a nonzero row.
    pub support: Vec<usize>,
}

impl PatternSupport {
    pub fn new(pattern: SymMatrix) -> Self {
        let support = (0..pattern.n())
            .filter(|&i| pattern.row(i).iter().any(|&v| v != 0.0))
            .collect();
        PatternSupport { pattern, support }
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// Whether `theta_exact` accepts this pattern against an `n`-node graph.
    pub fn check_enumerable(&self, n: usize) -> Result<()> {
        let k = self.support_size();
        if self.pattern.n() > n {
            return Err(Error::invalid(format!(
                "pattern has {} nodes but the graph has {n}",
                self.pattern.n()
            )));
        }
        let placements = (0..k as u64)
            .try_fold(1u64, |acc, i| acc.checked_mul(n as u64 - i))
            .unwrap_or(u64::MAX);
        let partial_ok = k <= THETA_MAX_SUPPORT && placements <= THETA_MAX_PLACEMENTS;
        let full_ok = k == n && n <= THETA_MAX_FULL;
        if partial_ok || full_ok {
            Ok(())
        } else {
            Err(Error::TooLarge {
                what: "theta_exact",
                size: placements,
                limit: THETA_MAX_PLACEMENTS,
                hint: "; use lambda_bound or qap_sdp for an upper bound",
            })
        }
    }
}

/// Optimal value and the maximizing placement: pattern node
/// `support[i]` goes to graph node `placement[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: f64,
    pub placement: Vec<usize>,
}

impl ThetaValue {
    /// The placed pattern `Q` with `tr(QA) = value`, as an `n x n` matrix.
    pub fn placed_pattern(&self, p: &PatternSupport, n: usize) -> SymMatrix {
        let mut q = SymMatrix::zeros(n);
        for (a, &s) in p.support.iter().enumerate() {
            for (b, &t) in p.support.iter().enumerate().skip(a) {
                q.set(self.placement[a], self.placement[b], p.pattern.get(s, t));
            }
        }
        q
    }
}

/// `Θ_P(A)`, with `P` implicitly zero-padded to `A`'s size.
///
/// Enumerates injective placements of the support of `P` depth-first; ties
/// keep the lexicographically first placement.
pub fn theta_exact(p: &PatternSupport, a: &SymMatrix) -> Result<ThetaValue> {
    let n = a.n();
    p.check_enumerable(n)?;
    let k = p.support_size();
    if k == 0 {
        return Ok(ThetaValue {
            value: 0.0,
            placement: Vec::new(),
        });
    }
    // Dense copies of the support block for the inner loop.
    let pk: Vec<f64> = p
        .support
        .iter()
        .flat_map(|&s| p.support.iter().map(move |&t| (s, t)))
        .map(|(s, t)| p.pattern.get(s, t))
        .collect();
    let mut search = Search {
        a: a.as_slice(),
        n,
        k,
        pk: &pk,
        used: vec![false; n],
        current: vec![0; k],
        best: f64::NEG_INFINITY,
        best_placement: vec![0; k],
    };
    search.descend(0, 0.0);
    Ok(ThetaValue {
        value: search.best,
        placement: search.best_placement,
    })
}

struct Search<'a> {
    a: &'a [f64],
    n: usize,
    k: usize,
    pk: &'a [f64],
    used: Vec<bool>,
    current: Vec<usize>,
    best: f64,
    best_placement: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, partial: f64) {
        if depth == self.k {
            if partial > self.best {
                self.best = partial;
                self.best_placement.copy_from_slice(&self.current);
            }
            return;
        }
        let n = self.n;
        let prow = &self.pk[depth * self.k..(depth + 1) * self.k];
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            let arow = &self.a[v * n..(v + 1) * n];
            let mut gain = prow[depth] * arow[v];
            for e in 0..depth {
                gain += 2.0 * prow[e] * arow[self.current[e]];
            }
            self.used[v] = true;
            self.current[depth] = v;
            self.descend(depth + 1, partial + gain);
            self.used[v] = false;
        }
    }
}

/// Spectral relaxation `Λ_P(A) = λ(P)^T λ(A)`, an upper bound on `Θ_P(A)`.
pub fn lambda_bound(p: &SymMatrix, a: &SymMatrix) -> Result<f64> {
    Error::check_dim(a.n(), p.n())?;
    let lp = spectrum(p)?;
    let la = spectrum(a)?;
    Ok(lp.iter().zip(&la).map(|(x, y)| x * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, cycle, path, rook, shrikhande, zero_pad};

    fn k3() -> PatternSupport {
        PatternSupport::new(clique(3))
    }

    #[test]
    fn triangle_values() {
        assert_eq!(theta_exact(&k3(), &clique(3)).unwrap().value, 6.0);
        assert_eq!(
            theta_exact(&k3(), &clique(3).scaled(0.5)).unwrap().value,
            3.0
        );
    }

    #[test]
    fn hamiltonian_cycle_detection() {
        let c8 = PatternSupport::new(cycle(8));
        assert_eq!(theta_exact(&c8, &cycle(8)).unwrap().value, 16.0);
        assert_eq!(theta_exact(&c8, &path(8)).unwrap().value, 14.0);
    }

    #[test]
    fn k4_in_rook_not_in_shrikhande() {
        let k4 = PatternSupport::new(clique(4));
        assert_eq!(theta_exact(&k4, &rook(4)).unwrap().value, 12.0);
        assert!(theta_exact(&k4, &shrikhande()).unwrap().value < 12.0);
    }

    #[test]
    fn placed_pattern_attains_value() {
        let a = shrikhande();
        let p = PatternSupport::new(zero_pad(&clique(3), 16).unwrap());
        let t = theta_exact(&p, &a).unwrap();
        assert_eq!(t.value, 6.0);
        assert_eq!(t.placed_pattern(&p, 16).dot(&a), 6.0);
    }

    #[test]
    fn caps() {
        let big = PatternSupport::new(clique(7));
        assert!(matches!(
            theta_exact(&big, &clique(20)),
            Err(Error::TooLarge { .. })
        ));
        // Full support at n = 7 is allowed by the factorial route.
        assert_eq!(theta_exact(&big, &clique(7)).unwrap().value, 42.0);
        assert!(theta_exact(&PatternSupport::new(clique(11)), &clique(11)).is_err());
    }

    #[test]
    fn zero_pattern() {
        let z = PatternSupport::new(SymMatrix::zeros(4));
        assert_eq!(theta_exact(&z, &clique(4)).unwrap().value, 0.0);
    }

    #[test]
    fn lambda_special_cases() {
        let a = cycle(6);
        let tr_a2 = a.dot(&a);
        assert!((lambda_bound(&a, &a).unwrap() - tr_a2).abs() < 1e-9);
        let mut w = a.clone();
        w.set(0, 0, 2.0);
        assert!((lambda_bound(&SymMatrix::identity(6), &w).unwrap() - 2.0).abs() < 1e-12);
    }
}
