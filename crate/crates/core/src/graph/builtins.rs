//! Named graph constructors.
//!
//! Spec strings: `cycle:k`, `chorded-cycle:k`, `path:k`, `clique:k`,
//! `empty:k`, `bipartite:a,b`, `rook:m`, `clebsch`, `shrikhande`.

use crate::error::{Error, Result};
use crate::graph::{Graph, SymMatrix};

/// Largest node count accepted by the parametric constructors.
pub const MAX_BUILTIN_NODES: usize = 4096;

pub fn builtin_graph(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let adjacency = match (name, arg) {
        ("cycle", Some(a)) => cycle(size_arg(spec, a, 3)?),
        ("chorded-cycle", Some(a)) => {
            let k = size_arg(spec, a, 8)?;
            if k % 4 != 0 {
                return Err(Error::invalid(format!(
                    "`{spec}`: size must be a multiple of 4"
                )));
            }
            chorded_cycle(k)
        }
        ("path", Some(a)) => path(size_arg(spec, a, 1)?),
        ("clique", Some(a)) => clique(size_arg(spec, a, 1)?),
        ("empty", Some(a)) => SymMatrix::zeros(size_arg(spec, a, 1)?),
        ("rook", Some(a)) => rook(size_arg(spec, a, 2)?),
        ("bipartite", Some(a)) => {
            let (p, q) = a
                .split_once(',')
                .ok_or_else(|| Error::UnknownGraph(spec.to_string()))?;
            complete_bipartite(size_arg(spec, p, 1)?, size_arg(spec, q, 1)?)
        }
        ("clebsch", None) => clebsch(),
        ("shrikhande", None) => shrikhande(),
        _ => return Err(Error::UnknownGraph(spec.to_string())),
    };
    Ok(Graph::named(adjacency, spec))
}

fn size_arg(spec: &str, a: &str, min: usize) -> Result<usize> {
    let k: usize = a
        .trim()
        .parse()
        .map_err(|_| Error::UnknownGraph(spec.to_string()))?;
    if k < min || k > MAX_BUILTIN_NODES {
        return Err(Error::invalid(format!(
            "`{spec}`: size {k} outside supported range {min}..={MAX_BUILTIN_NODES}"
        )));
    }
    Ok(k)
}

fn unit_graph(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| if i != j && adjacent(i, j) { 1.0 } else { 0.0 })
}

pub fn cycle(k: usize) -> SymMatrix {
    unit_graph(k, |i, j| (j + k - i) % k == 1 || (i + k - j) % k == 1)
}

/// `k`-cycle plus the two diameters `{0, k/2}` and `{k/4, 3k/4}`.
pub fn chorded_cycle(k: usize) -> SymMatrix {
    let mut a = cycle(k);
    a.set(0, k / 2, 1.0);
    a.set(k / 4, 3 * k / 4, 1.0);
    a
}

pub fn path(k: usize) -> SymMatrix {
    unit_graph(k, |i, j| i.abs_diff(j) == 1)
}

pub fn clique(k: usize) -> SymMatrix {
    unit_graph(k, |_, _| true)
}

pub fn complete_bipartite(p: usize, q: usize) -> SymMatrix {
    unit_graph(p + q, |i, j| (i < p) != (j < p))
}

/// `m x m` rook's graph: cells sharing a row or a column.
pub fn rook(m: usize) -> SymMatrix {
    unit_graph(m * m, |i, j| i / m == j / m || i % m == j % m)
}

/// Folded 5-cube: vertices `{0,1}^4`, adjacent when the labels differ in
/// exactly one or exactly four coordinates. SRG(16, 5, 0, 2).
pub fn clebsch() -> SymMatrix {
    unit_graph(16, |i, j| matches!((i ^ j).count_ones(), 1 | 4))
}

/// Cayley graph on `Z4 x Z4` with connection set `{±(1,0), ±(0,1), ±(1,1)}`.
/// SRG(16, 6, 2, 2).
pub fn shrikhande() -> SymMatrix {
    unit_graph(16, |i, j| {
        let da = (j / 4 + 4 - i / 4) % 4;
        let db = (j % 4 + 4 - i % 4) % 4;
        matches!(
            (da, db),
            (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3)
        )
    })
}

/// Checks `A^2 = kI + λA + μ(J - I - A)` exactly in integer arithmetic.
pub fn satisfies_srg(a: &SymMatrix, k: i64, lambda: i64, mu: i64) -> bool {
    if !a.is_unweighted() {
        return false;
    }
    let n = a.n();
    let adj: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) as i64).collect())
        .collect();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let sq: i64 = (0..n).map(|l| adj[i][l] * adj[l][j]).sum();
            let expected = if i == j {
                k
            } else if adj[i][j] == 1 {
                lambda
            } else {
                mu
            };
            sq == expected
        })
    })
}

/// `pattern` placed in the top-left block of an `n x n` zero matrix.
pub fn zero_pad(pattern: &SymMatrix, n: usize) -> Result<SymMatrix> {
    if n < pattern.n() {
        return Err(Error::invalid(format!(
            "cannot pad a {}-node pattern into {n} nodes",
            pattern.n()
        )));
    }
    let mut out = SymMatrix::zeros(n);
    for i in 0..pattern.n() {
        for j in i..pattern.n() {
            out.set(i, j, pattern.get(i, j));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_count(a: &SymMatrix) -> f64 {
        (a.sum() - a.trace()) / 2.0
    }

    fn degrees(a: &SymMatrix) -> Vec<f64> {
        a.row_sums()
    }

    #[test]
    fn strongly_regular_builtins() {
        assert!(satisfies_srg(&clebsch(), 5, 0, 2));
        assert!(satisfies_srg(&shrikhande(), 6, 2, 2));
        assert!(satisfies_srg(&rook(4), 6, 2, 2));
        assert!(!satisfies_srg(&cycle(16), 2, 0, 1));
    }

    #[test]
    fn edge_counts_and_regularity() {
        for k in 3..20 {
            assert_eq!(edge_count(&cycle(k)), k as f64);
            assert!(degrees(&cycle(k)).iter().all(|&d| d == 2.0));
        }
        assert_eq!(edge_count(&clebsch()), 40.0);
        assert_eq!(edge_count(&shrikhande()), 48.0);
        assert_eq!(edge_count(&rook(4)), 48.0);
        assert!(degrees(&clebsch()).iter().all(|&d| d == 5.0));
        assert!(degrees(&shrikhande()).iter().all(|&d| d == 6.0));
        assert_eq!(edge_count(&path(16)), 15.0);
        assert_eq!(edge_count(&chorded_cycle(16)), 18.0);
        assert_eq!(chorded_cycle(16).get(4, 12), 1.0);
        assert_eq!(edge_count(&complete_bipartite(2, 3)), 6.0);
    }

    #[test]
    fn triangle_is_three_cycle() {
        assert_eq!(cycle(3), clique(3));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(builtin_graph("cycle:16").unwrap().n(), 16);
        assert_eq!(builtin_graph("empty:40").unwrap().adjacency.sum(), 0.0);
        assert_eq!(builtin_graph("bipartite:2,3").unwrap().n(), 5);
        assert!(matches!(
            builtin_graph("petersen"),
            Err(Error::UnknownGraph(_))
        ));
        assert!(builtin_graph("cycle:2").is_err());
        assert!(builtin_graph("clique:x").is_err());
        assert!(builtin_graph("cycle").is_err());
        assert!(builtin_graph("chorded-cycle:10").is_err());
        assert_eq!(builtin_graph("chorded-cycle:16").unwrap().n(), 16);
    }

    #[test]
    fn zero_pad_block() {
        let k3 = clique(3);
        let p = zero_pad(&k3, 5).unwrap();
        assert_eq!(p.n(), 5);
        assert_eq!(p.sum(), 6.0);
        assert_eq!(p.get(0, 1), 1.0);
        assert_eq!(p.get(3, 4), 0.0);
        assert_eq!(zero_pad(&k3, 3).unwrap(), k3);
        assert!(zero_pad(&k3, 2).is_err());
    }
}
