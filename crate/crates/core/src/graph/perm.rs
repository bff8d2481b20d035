use crate::error::{Error, Result};
use crate::graph::{RngStream, SymMatrix};

/// A bijection on `0..n`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::invalid("permutation must be nonempty"));
        }
        let mut seen = vec![false; n];
        for &i in &map {
            if i >= n || seen[i] {
                return Err(Error::invalid(format!(
                    "not a bijection on 0..{n}: {map:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Uniform random permutation by Fisher–Yates.
    pub fn random(rng: &mut RngStream, n: usize) -> Self {
        assert!(n >= 1, "random permutation needs n >= 1");
        let mut map: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            map.swap(i, j);
        }
        Permutation { map }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &p) in self.map.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { map: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.n(), other.n());
        Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    /// Reorders a vector: `out[i] = x[self(i)]`.
    pub fn permute_vec(&self, x: &[f64]) -> Vec<f64> {
        self.map.iter().map(|&i| x[i]).collect()
    }
}

/// `Π A Π^T` with the convention `result[i][j] = A[pi(i)][pi(j)]`.
pub fn conjugate(a: &SymMatrix, pi: &Permutation) -> Result<SymMatrix> {
    Error::check_dim(a.n(), pi.n())?;
    let n = a.n();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let src = a.row(pi.apply(i));
        let dst = &mut data[i * n..(i + 1) * n];
        for (j, d) in dst.iter_mut().enumerate() {
            *d = src[pi.apply(j)];
        }
    }
    Ok(SymMatrix::from_row_major(n, data))
}
