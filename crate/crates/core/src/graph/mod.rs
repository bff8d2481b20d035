//! Graph data model: symmetric adjacency matrices, node relabelings,
//! builtin constructors, deterministic randomness, and the dense text format.

mod builtins;
mod io;
mod matrix;
mod perm;
mod rng;

pub use builtins::{
    builtin_graph, chorded_cycle, clebsch, clique, complete_bipartite, cycle, path, rook,
    satisfies_srg, shrikhande, zero_pad,
};
pub use io::{parse_graph, serialize_graph};
pub use matrix::{SymMatrix, SYMMETRY_TOL};
pub use perm::{conjugate, Permutation};
pub use rng::{trial_seed, RngStream};

/// An adjacency matrix with an optional label.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    pub adjacency: SymMatrix,
    pub name: Option<String>,
}

impl Graph {
    pub fn new(adjacency: SymMatrix) -> Self {
        Graph {
            adjacency,
            name: None,
        }
    }

    pub fn named(adjacency: SymMatrix, name: impl Into<String>) -> Self {
        Graph {
            adjacency,
            name: Some(name.into()),
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.n()
    }
}

impl From<SymMatrix> for Graph {
    fn from(adjacency: SymMatrix) -> Self {
        Graph::new(adjacency)
    }
}

/// Resolves a builtin spec such as `cycle:16`, or `file:path` for a graph in
/// the dense text format.
pub fn load_graph(spec: &str) -> crate::error::Result<Graph> {
    match spec.strip_prefix("file:") {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let mut g = parse_graph(&text)?;
            g.name.get_or_insert_with(|| spec.to_string());
            Ok(g)
        }
        None => builtin_graph(spec),
    }
}

/// Uniform random relabeling of `n` nodes.
pub fn random_permutation(rng: &mut RngStream, n: usize) -> Permutation {
    Permutation::random(rng, n)
}

/// Random unweighted graph with independent edges of probability `p`.
pub fn random_graph(rng: &mut RngStream, n: usize, p: f64) -> SymMatrix {
    let mut a = SymMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.bernoulli(p) {
                a.set(i, j, 1.0);
            }
        }
    }
    a
}

/// Random symmetric matrix with i.i.d. standard Gaussian upper triangle;
/// the diagonal is zeroed unless `diagonal` is set.
pub fn gaussian_symmetric(rng: &mut RngStream, n: usize, diagonal: bool) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| {
        if i == j && !diagonal {
            0.0
        } else {
            rng.gaussian()
        }
    })
}
