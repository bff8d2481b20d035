use crate::error::{Error, Result};
use crate::graph::SymMatrix;
use crate::invariants::{laplacian, theta_exact, PatternSupport};
use crate::linalg::{
    eig_fast, is_positive_definite, majorization_violation, project_permutahedron, sorted_desc,
    spectrum, EigenDecomposition,
};

/// Cutting-plane rounds per projection onto a cut-based set.
const CUT_ROUNDS: usize = 50;
/// A cut-based projection stops once the newest cut is violated by at most
/// this distance.
const CUT_DISTANCE_TOL: f64 = 1e-11;
/// Shortfall of the defining inequality accepted by the cheap membership
/// test inside cut-based projections.
const CUT_SLACK: f64 = 1e-10;
/// Relative eigenvalue window for extra Laplacian cuts.
const CUT_WINDOW: f64 = 0.05;
/// Cuts carried between calls by [`ConstraintSet::project_by_cuts`].
const CUT_CACHE: usize = 16;

/// The closed halfspace `tr(QX) <= beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub q: SymMatrix,
    pub beta: f64,
}

impl Halfspace {
    pub fn violation(&self, x: &SymMatrix) -> f64 {
        self.q.dot(x) - self.beta
    }

    pub fn project(&self, x: &SymMatrix) -> SymMatrix {
        let v = self.violation(x);
        let qq = self.q.dot(&self.q);
        if v <= 0.0 || qq == 0.0 {
            return x.clone();
        }
        let mut y = x.clone();
        y.axpy(-v / qq, &self.q);
        y
    }

    /// Distance from `x` to the halfspace.
    pub fn distance(&self, x: &SymMatrix) -> f64 {
        let qq = self.q.dot(&self.q);
        if qq == 0.0 {
            return 0.0;
        }
        self.violation(x).max(0.0) / qq.sqrt()
    }
}

/// A polyhedral outer approximation of a cut-based set: recent cuts and
/// the Gram matrix of their normals.
#[derive(Clone, Debug, Default)]
pub(crate) struct CutCache {
    cuts: Vec<Halfspace>,
    gram: Vec<Vec<f64>>,
}

impl CutCache {
    fn push(&mut self, h: Halfspace) {
        let row: Vec<f64> = self
            .cuts
            .iter()
            .map(|c| c.q.dot(&h.q))
            .chain([h.q.dot(&h.q)])
            .collect();
        for (r, g) in self.gram.iter_mut().zip(&row) {
            r.push(*g);
        }
        self.gram.push(row);
        self.cuts.push(h);
    }

    /// Keeps only the `keep` most recent cuts.
    fn retain_recent(&mut self, keep: usize) {
        let drop = self.cuts.len().saturating_sub(keep);
        if drop > 0 {
            self.cuts.drain(..drop);
            self.gram.drain(..drop);
            for r in &mut self.gram {
                r.drain(..drop);
            }
        }
    }

    /// Projects `y` onto the intersection of the cached halfspaces. The
    /// multipliers solve `min ½λᵀGλ - eᵀλ, λ >= 0`, where `e` holds the
    /// violations at `y`.
    fn project(&self, y: &SymMatrix) -> SymMatrix {
        let excess: Vec<f64> = self.cuts.iter().map(|h| h.violation(y)).collect();
        let mut x = y.clone();
        if excess.iter().all(|&e| e <= 0.0) {
            return x;
        }
        let gram: Vec<f64> = self.gram.iter().flatten().copied().collect();
        let lambda = nonneg_quadratic(&gram, &excess);
        for (h, l) in self.cuts.iter().zip(&lambda) {
            if *l != 0.0 {
                x.axpy(-l, &h.q);
            }
        }
        x
    }
}

/// `argmin_{λ >= 0} ½λᵀGλ - eᵀλ` for a small positive semidefinite `G`.
fn nonneg_quadratic(gram: &[f64], e: &[f64]) -> Vec<f64> {
    let k = e.len();
    let scale = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let ridge = 1e-13 * (0..k).map(|i| gram[i * k + i]).fold(0.0, f64::max);
    let mut lambda = vec![0.0; k];
    let mut free = vec![false; k];
    let solve_free = |free: &[bool]| -> Vec<f64> {
        let idx: Vec<usize> = (0..k).filter(|&i| free[i]).collect();
        let m = idx.len();
        let mut a = vec![0.0; m * m];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                a[r * m + c] = gram[i * k + j];
            }
            a[r * m + r] += ridge;
        }
        let b: Vec<f64> = idx.iter().map(|&i| e[i]).collect();
        let sol = cholesky_solve(&mut a, b, m);
        let mut full = vec![0.0; k];
        for (r, &i) in idx.iter().enumerate() {
            full[i] = sol[r];
        }
        full
    };
    for _ in 0..3 * k + 3 {
        let w: Vec<f64> = (0..k)
            .map(|i| e[i] - (0..k).map(|j| gram[i * k + j] * lambda[j]).sum::<f64>())
            .collect();
        let entering = (0..k)
            .filter(|&i| !free[i] && w[i] > tol)
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = entering else { break };
        free[j] = true;
        loop {
            let s = solve_free(&free);
            if (0..k).all(|i| !free[i] || s[i] > 0.0) {
                lambda = s;
                break;
            }
            // Step toward s until the first free multiplier hits zero, then drop it.
            let mut alpha = 1.0f64;
            let mut blocking = None;
            for i in (0..k).filter(|&i| free[i] && s[i] <= 0.0) {
                let a = lambda[i] / (lambda[i] - s[i]);
                if blocking.is_none() || a < alpha {
                    alpha = a;
                    blocking = Some(i);
                }
            }
            for i in 0..k {
                lambda[i] += alpha * (s[i] - lambda[i]);
                if free[i] && (lambda[i] <= 0.0 || Some(i) == blocking) {
                    free[i] = false;
                    lambda[i] = 0.0;
                }
            }
            if !free.iter().any(|&f| f) {
                break;
            }
        }
    }
    lambda
}

/// Solves `A x = b` for symmetric positive definite `A` (row-major, `m x m`),
/// overwriting `A` with its Cholesky factor. Nonpositive pivots are clamped,
/// which zeroes the corresponding direction.
fn cholesky_solve(a: &mut [f64], mut b: Vec<f64>, m: usize) -> Vec<f64> {
    for j in 0..m {
        let mut d = a[j * m + j];
        for p in 0..j {
            d -= a[j * m + p] * a[j * m + p];
        }
        let d = if d > 0.0 { d.sqrt() } else { f64::INFINITY };
        a[j * m + j] = d;
        for i in j + 1..m {
            let mut s = a[i * m + j];
            for p in 0..j {
                s -= a[i * m + p] * a[j * m + p];
            }
            a[i * m + j] = s / d;
        }
    }
    for i in 0..m {
        let mut s = b[i];
        for p in 0..i {
            s -= a[i * m + p] * b[p];
        }
        b[i] = s / a[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = b[i];
        for p in i + 1..m {
            s -= a[p * m + i] * b[p];
        }
        b[i] = s / a[i * m + i];
    }
    b
}

/// A convex set of symmetric matrices closed under simultaneous row and
/// column permutation.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintSet {
    /// `lo <= X_ij <= hi` entrywise.
    Box { lo: f64, hi: f64 },
    /// `X_ii = value`.
    DiagFix { value: f64 },
    /// `X1 = value * 1`.
    DegreeEq { value: f64 },
    /// `X1 <= value * 1`.
    DegreeCap { value: f64 },
    /// `Σ_{i<j} X_ij = value`.
    EdgeSumEq { value: f64 },
    /// Convex hull of matrices with spectrum `reference`: `λ(X)` is
    /// majorized by it.
    SpectralHull { reference: Vec<f64> },
    /// Matrices whose row sums are majorized by the reference degrees.
    DegreeHull { reference: Vec<f64> },
    /// Laplacian second-smallest eigenvalue at least `epsilon`.
    Lambda2Ge { epsilon: f64 },
    /// `Θ_P(X) <= bound`.
    ThetaCap { pattern: PatternSupport, bound: f64 },
}

impl ConstraintSet {
    pub fn unit_box() -> Self {
        ConstraintSet::Box { lo: 0.0, hi: 1.0 }
    }

    pub fn diag_zero() -> Self {
        ConstraintSet::DiagFix { value: 0.0 }
    }

    pub fn spectral_hull(reference: &SymMatrix) -> Result<Self> {
        Ok(ConstraintSet::SpectralHull {
            reference: spectrum(reference)?,
        })
    }

    pub fn degree_hull(reference: &SymMatrix) -> Self {
        ConstraintSet::DegreeHull {
            reference: sorted_desc(&reference.row_sums()),
        }
    }

    pub fn theta_cap(pattern: SymMatrix, bound: f64) -> Self {
        ConstraintSet::ThetaCap {
            pattern: PatternSupport::new(pattern),
            bound,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConstraintSet::Box { .. } => "box",
            ConstraintSet::DiagFix { .. } => "diag_fix",
            ConstraintSet::DegreeEq { .. } => "degree_eq",
            ConstraintSet::DegreeCap { .. } => "degree_cap",
            ConstraintSet::EdgeSumEq { .. } => "edge_sum_eq",
            ConstraintSet::SpectralHull { .. } => "spectral_hull",
            ConstraintSet::DegreeHull { .. } => "degree_hull",
            ConstraintSet::Lambda2Ge { .. } => "lambda2_ge",
            ConstraintSet::ThetaCap { .. } => "theta_cap",
        }
    }

    /// Whether [`project`](Self::project) works through cuts, projecting
    /// onto a polyhedral outer approximation, rather than a closed form.
    pub fn is_cut_based(&self) -> bool {
        matches!(
            self,
            ConstraintSet::DegreeHull { .. }
                | ConstraintSet::Lambda2Ge { .. }
                | ConstraintSet::ThetaCap { .. }
        )
    }

    /// Checks that the set can act on `n x n` matrices.
    pub fn check_size(&self, n: usize) -> Result<()> {
        match self {
            ConstraintSet::SpectralHull { reference } | ConstraintSet::DegreeHull { reference } => {
                Error::check_dim(reference.len(), n)
            }
            ConstraintSet::ThetaCap { pattern, .. } => pattern.check_enumerable(n),
            ConstraintSet::Box { lo, hi } if lo > hi => {
                Err(Error::invalid(format!("empty box [{lo}, {hi}]")))
            }
            _ => Ok(()),
        }
    }

    /// Nonnegative violation measure, zero exactly on the set.
    ///
    /// Box, diagonal and affine kinds report the Euclidean distance; hull
    /// kinds the worst prefix-sum excess plus the total mismatch;
    /// `Lambda2Ge` and `ThetaCap` the shortfall of the defining inequality.
    pub fn residual(&self, x: &SymMatrix) -> Result<f64> {
        self.check_size(x.n())?;
        Ok(match self {
            ConstraintSet::Box { lo, hi } => x
                .as_slice()
                .iter()
                .map(|&v| {
                    let d = v - v.clamp(*lo, *hi);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            ConstraintSet::DiagFix { value } => x
                .diagonal()
                .iter()
                .map(|d| (d - value) * (d - value))
                .sum::<f64>()
                .sqrt(),
            ConstraintSet::DegreeEq { .. }
            | ConstraintSet::DegreeCap { .. }
            | ConstraintSet::EdgeSumEq { .. } => self.project(x)?.dist(x),
            ConstraintSet::SpectralHull { reference } => {
                majorization_violation(reference, &spectrum(x)?)
            }
            ConstraintSet::DegreeHull { reference } => {
                majorization_violation(reference, &x.row_sums())
            }
            ConstraintSet::Lambda2Ge { epsilon } => {
                if fiedler_exceeds(x, *epsilon) {
                    0.0
                } else {
                    (epsilon - fiedler(x)?).max(0.0)
                }
            }
            ConstraintSet::ThetaCap { pattern, bound } => {
                (theta_exact(pattern, x)?.value - bound).max(0.0)
            }
        })
    }

    /// Exact projection for the closed-form kinds. Cut-based kinds project
    /// onto a growing polyhedral outer approximation built from cuts at the
    /// successive iterates, which approaches the exact projection.
    pub fn project(&self, x: &SymMatrix) -> Result<SymMatrix> {
        self.check_size(x.n())?;
        let n = x.n();
        Ok(match self {
            ConstraintSet::Box { lo, hi } => x.map(|v| v.clamp(*lo, *hi)),
            ConstraintSet::DiagFix { value } => {
                let mut y = x.clone();
                for i in 0..n {
                    y.set(i, i, *value);
                }
                y
            }
            ConstraintSet::DegreeEq { value } => {
                let r: Vec<f64> = x.row_sums().iter().map(|s| value - s).collect();
                let shift = r.iter().sum::<f64>() / (2.0 * n as f64);
                let u: Vec<f64> = r.iter().map(|ri| (ri - shift) / n as f64).collect();
                add_rank_two(x, &u, 1.0)
            }
            ConstraintSet::DegreeCap { value } => {
                let mu = degree_cap_multipliers(&x.row_sums(), *value);
                if mu.iter().all(|&m| m == 0.0) {
                    x.clone()
                } else {
                    add_rank_two(x, &mu, -0.5)
                }
            }
            ConstraintSet::EdgeSumEq { value } => {
                let pairs = (n * (n - 1)) as f64;
                if pairs == 0.0 {
                    x.clone()
                } else {
                    let s = (x.sum() - x.trace()) / 2.0;
                    let d = 2.0 * (s - value) / pairs;
                    let mut y = x.map(|v| v - d);
                    for i in 0..n {
                        y.set(i, i, x.get(i, i));
                    }
                    y
                }
            }
            ConstraintSet::SpectralHull { reference } => {
                let ed = eig_fast(x)?;
                let values = project_permutahedron(&ed.values, reference)?;
                ed.reconstruct_with(&values)
            }
            _ => self.project_by_cuts(x, &mut CutCache::default())?,
        })
    }

    /// Projection onto a cut-based set through a polyhedral outer
    /// approximation: project onto the cuts gathered so far, cut again at
    /// the result, and repeat. `cache` seeds the approximation with cuts from
    /// earlier calls (every cut is valid for the whole set) and receives the
    /// most recent ones on return.
    pub(crate) fn project_by_cuts(&self, x: &SymMatrix, cache: &mut CutCache) -> Result<SymMatrix> {
        let mut z = cache.project(x);
        for _ in 0..CUT_ROUNDS {
            if self.nearly_contains(&z) {
                break;
            }
            let new = self.cuts_at(&z)?;
            if !new.iter().any(|h| h.distance(&z) > CUT_DISTANCE_TOL) {
                break;
            }
            for h in new {
                cache.push(h);
            }
            z = cache.project(x);
        }
        cache.retain_recent(CUT_CACHE);
        Ok(z)
    }

    /// Whether [`residual`](Self::residual) is at most `tol`, skipping the
    /// eigendecomposition when a factorization settles it.
    pub fn within(&self, x: &SymMatrix, tol: f64) -> Result<bool> {
        if let ConstraintSet::Lambda2Ge { epsilon } = self {
            self.check_size(x.n())?;
            if fiedler_exceeds(x, epsilon - tol) {
                return Ok(true);
            }
        }
        Ok(self.residual(x)? <= tol)
    }

    /// Cuts used by [`project_by_cuts`](Self::project_by_cuts). Laplacian
    /// sets contribute one cut per eigenvector whose eigenvalue is below
    /// `ε + CUT_WINDOW`, which tracks a clustered low spectrum far better
    /// than a single aggregated cut.
    fn cuts_at(&self, z: &SymMatrix) -> Result<Vec<Halfspace>> {
        match self {
            ConstraintSet::Lambda2Ge { epsilon } => {
                let window = CUT_WINDOW * epsilon.abs().max(1.0);
                Ok(low_laplacian_pairs(z, epsilon + window)?
                    .iter()
                    .map(|(_, v)| laplacian_cut(v, *epsilon))
                    .collect())
            }
            _ => Ok(self.cut_oracle(z)?.into_iter().collect()),
        }
    }

    /// Cheap sufficient test that `x` lies within [`CUT_SLACK`] of the set.
    fn nearly_contains(&self, x: &SymMatrix) -> bool {
        match self {
            ConstraintSet::Lambda2Ge { epsilon } => fiedler_exceeds(x, epsilon - CUT_SLACK),
            _ => false,
        }
    }

    /// A halfspace containing the set and violated by `x`, or `None` when
    /// `x` satisfies the defining inequalities.
    pub fn cut_oracle(&self, x: &SymMatrix) -> Result<Option<Halfspace>> {
        self.check_size(x.n())?;
        let n = x.n();
        match self {
            ConstraintSet::DegreeHull { reference } => Ok(degree_hull_cut(reference, x)),
            ConstraintSet::Lambda2Ge { epsilon } => {
                if fiedler_exceeds(x, *epsilon) {
                    return Ok(None);
                }
                let low = low_laplacian_pairs(x, *epsilon)?;
                if low.is_empty() {
                    return Ok(None);
                }
                // Every eigenpair below ε contributes v^T L_X v >= ε, weighted
                // by its shortfall; v^T L_X v = Σ_{i<j} X_ij (v_i - v_j)^2.
                let total: f64 = low.iter().map(|(l, _)| epsilon - l).sum();
                let mut q = SymMatrix::zeros(n);
                for (lambda, v) in &low {
                    let c = (epsilon - lambda) / total;
                    for i in 0..n {
                        for j in i + 1..n {
                            let d = v[i] - v[j];
                            q.set(i, j, q.get(i, j) - 0.5 * c * d * d);
                        }
                    }
                }
                Ok(Some(Halfspace { q, beta: -epsilon }))
            }
            ConstraintSet::ThetaCap { pattern, bound } => {
                let t = theta_exact(pattern, x)?;
                if t.value <= *bound {
                    return Ok(None);
                }
                Ok(Some(Halfspace {
                    q: t.placed_pattern(pattern, n),
                    beta: *bound,
                }))
            }
            other => Err(Error::invalid(format!(
                "{} has an exact projection and no cut oracle",
                other.kind()
            ))),
        }
    }

    /// `β - tr(QX)`-style slack for the inequality kinds (positive inside);
    /// `None` for equality kinds.
    pub fn slack(&self, x: &SymMatrix) -> Result<Option<f64>> {
        self.check_size(x.n())?;
        Ok(match self {
            ConstraintSet::Box { lo, hi } => Some(
                x.as_slice()
                    .iter()
                    .map(|&v| (v - lo).min(hi - v))
                    .fold(f64::INFINITY, f64::min),
            ),
            ConstraintSet::DegreeCap { value } => Some(
                x.row_sums()
                    .iter()
                    .map(|r| value - r)
                    .fold(f64::INFINITY, f64::min),
            ),
            ConstraintSet::Lambda2Ge { epsilon } => Some(fiedler(x)? - epsilon),
            ConstraintSet::ThetaCap { pattern, bound } => {
                Some(bound - theta_exact(pattern, x)?.value)
            }
            _ => None,
        })
    }
}

/// `X + s (u 1^T + 1 u^T)`.
fn add_rank_two(x: &SymMatrix, u: &[f64], s: f64) -> SymMatrix {
    let n = x.n();
    SymMatrix::from_fn(n, |i, j| x.get(i, j) + s * (u[i] + u[j]))
}

/// Multipliers of the projection onto `{X : X1 <= c 1}`.
///
/// The projection is `X - ½(μ1^T + 1μ^T)` with
/// `μ_i = max(0, (2(r_i - c) - S)/n)` and `S = Σμ`; `S` solves a monotone
/// scalar equation whose active set is a prefix of the rows sorted by `r`.
fn degree_cap_multipliers(r: &[f64], c: f64) -> Vec<f64> {
    let n = r.len() as f64;
    let t: Vec<f64> = r.iter().map(|ri| 2.0 * (ri - c)).collect();
    let ts = sorted_desc(&t);
    let mut s = 0.0;
    let mut prefix = 0.0;
    for (k, &tk) in ts.iter().enumerate() {
        if tk <= 0.0 && k == 0 {
            break;
        }
        prefix += tk;
        let cand = prefix / (n + (k + 1) as f64);
        let next = ts.get(k + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if tk > cand && cand >= next {
            s = cand;
            break;
        }
    }
    t.iter().map(|ti| ((ti - s) / n).max(0.0)).collect()
}

fn degree_hull_cut(reference: &[f64], x: &SymMatrix) -> Option<Halfspace> {
    let n = x.n();
    let r = x.row_sums();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| r[j].total_cmp(&r[i]));
    let mut best: Option<(f64, Halfspace)> = None;
    let mut consider = |score: f64, h: Halfspace| {
        if score > 0.0 && best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, h));
        }
    };
    let (mut sx, mut sb) = (0.0, 0.0);
    let mut indicator = vec![0.0; n];
    for k in 0..n {
        sx += r[order[k]];
        sb += reference[k];
        indicator[order[k]] = 1.0;
        if k + 1 < n {
            // Σ_{i∈S} (X1)_i = tr(QX) with Q = ½(1_S 1^T + 1 1_S^T)
            let q = SymMatrix::from_fn(n, |i, j| 0.5 * (indicator[i] + indicator[j]));
            let norm = q.frobenius_norm();
            consider((sx - sb) / norm, Halfspace { q, beta: sb });
        }
    }
    let norm = n as f64;
    if sx > sb {
        consider(
            (sx - sb) / norm,
            Halfspace {
                q: SymMatrix::ones(n),
                beta: sb,
            },
        );
    } else if sx < sb {
        consider(
            (sb - sx) / norm,
            Halfspace {
                q: SymMatrix::ones(n).scaled(-1.0),
                beta: -sb,
            },
        );
    }
    best.map(|(_, h)| h)
}

/// Eigenvalues of `L_X` on the complement of `1`, in descending order, with
/// their eigenvectors. Adding a multiple of `J` lifts the eigenvalue of `1`
/// above the rest of the spectrum.
fn laplacian_spectrum(x: &SymMatrix) -> Result<EigenDecomposition> {
    let n = x.n();
    if n < 2 {
        return Err(Error::invalid(
            "Laplacian constraints need at least two nodes",
        ));
    }
    let l = laplacian(x);
    let s = (l.frobenius_norm() + 1.0) / n as f64;
    eig_fast(&l.map(|v| v + s))
}

/// `min_{v ⊥ 1, |v| = 1} v^T L_X v`.
fn fiedler(x: &SymMatrix) -> Result<f64> {
    Ok(laplacian_spectrum(x)?.values[x.n() - 1])
}

/// Sufficient test for `λ_{n-1}(L_X) > epsilon` by Cholesky of
/// `L_X + sJ - epsilon I`, with `s` lifting the eigenvalue of `1` clear.
fn fiedler_exceeds(x: &SymMatrix, epsilon: f64) -> bool {
    let n = x.n();
    let s = (epsilon.abs() + 1.0) / n as f64;
    let mut m = laplacian(x).map(|v| v + s);
    for i in 0..n {
        m.set(i, i, m.get(i, i) - epsilon);
    }
    is_positive_definite(&m)
}

/// The valid inequality `v^T L_X v >= epsilon` for a unit `v ⊥ 1`, written
/// as `tr(QX) <= -epsilon`; `v^T L_X v = Σ_{i<j} X_ij (v_i - v_j)^2`.
fn laplacian_cut(v: &[f64], epsilon: f64) -> Halfspace {
    let n = v.len();
    let mut q = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = v[i] - v[j];
            q.set(i, j, -0.5 * d * d);
        }
    }
    Halfspace { q, beta: -epsilon }
}

/// Eigenpairs of `L_X` orthogonal to `1` with eigenvalue below `epsilon`.
fn low_laplacian_pairs(x: &SymMatrix, epsilon: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let ed = laplacian_spectrum(x)?;
    Ok((1..x.n())
        .filter(|&k| ed.values[k] < epsilon)
        .map(|k| (ed.values[k], ed.vector(k)))
        .collect())
}
