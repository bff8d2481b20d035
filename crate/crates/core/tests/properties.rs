//! Property tests: invariance under relabeling, nonexpansive projections,
//! and convexity of the invariants that are maxima of linear functions.

use cvxgraph::graph::{conjugate, RngStream};
use cvxgraph::invariants::{
    degree_sequence, edge_sum, fiedler_value, lambda_bound, max_degree, maxcut_exact,
    spectral_functional, theta_exact, PatternSupport,
};
use cvxgraph::linalg::{project_permutahedron, project_psd, project_simplex, spectrum};
use cvxgraph::sets::ConstraintSet;
use cvxgraph::{Permutation, SymMatrix};
use proptest::prelude::*;

fn sym(n: usize, entries: &[f64]) -> SymMatrix {
    let mut k = 0;
    let mut a = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            a.set(i, j, entries[k]);
            k += 1;
        }
    }
    a
}

/// Symmetric `n x n` matrices with entries in `[lo, hi]`, `n` in `2..=max_n`.
fn matrices(max_n: usize, lo: f64, hi: f64) -> impl Strategy<Value = SymMatrix> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(lo..hi, n * (n + 1) / 2).prop_map(move |e| sym(n, &e))
    })
}

fn pair(max_n: usize, lo: f64, hi: f64) -> impl Strategy<Value = (SymMatrix, SymMatrix)> {
    (2..=max_n).prop_flat_map(move |n| {
        let len = n * (n + 1) / 2;
        (
            prop::collection::vec(lo..hi, len),
            prop::collection::vec(lo..hi, len),
        )
            .prop_map(move |(a, b)| (sym(n, &a), sym(n, &b)))
    })
}

fn zero_diagonal(a: &SymMatrix) -> SymMatrix {
    SymMatrix::from_fn(a.n(), |i, j| if i == j { 0.0 } else { a.get(i, j) })
}

fn relabel(a: &SymMatrix, seed: u64) -> SymMatrix {
    let p = Permutation::random(&mut RngStream::new(seed), a.n());
    conjugate(a, &p).unwrap()
}

fn max_gap(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

fn k3() -> PatternSupport {
    PatternSupport::new(SymMatrix::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariants_ignore_relabeling(a in matrices(7, 0.0, 1.0), seed in any::<u64>()) {
        let a = zero_diagonal(&a);
        let b = relabel(&a, seed);
        prop_assert!((edge_sum(&a) - edge_sum(&b)).abs() <= 1e-12);
        prop_assert!((max_degree(&a) - max_degree(&b)).abs() <= 1e-12);
        prop_assert!(max_gap(&degree_sequence(&a).sorted, &degree_sequence(&b).sorted) <= 1e-12);
        prop_assert!(max_gap(&spectrum(&a).unwrap(), &spectrum(&b).unwrap()) <= 1e-10);
        prop_assert!((fiedler_value(&a).unwrap() - fiedler_value(&b).unwrap()).abs() <= 1e-10);
        prop_assert!((maxcut_exact(&a).unwrap() - maxcut_exact(&b).unwrap()).abs() <= 1e-12);
        if a.n() >= 3 {
            let ta = theta_exact(&k3(), &a).unwrap().value;
            let tb = theta_exact(&k3(), &b).unwrap().value;
            prop_assert!((ta - tb).abs() <= 1e-12);
        }
    }

    #[test]
    fn residuals_ignore_relabeling(a in matrices(6, -0.5, 1.5), seed in any::<u64>()) {
        let n = a.n();
        let b = relabel(&a, seed);
        let reference = SymMatrix::from_fn(n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let sets = [
            ConstraintSet::unit_box(),
            ConstraintSet::diag_zero(),
            ConstraintSet::DegreeEq { value: 2.0 },
            ConstraintSet::DegreeCap { value: 1.5 },
            ConstraintSet::EdgeSumEq { value: 3.0 },
            ConstraintSet::spectral_hull(&reference).unwrap(),
            ConstraintSet::degree_hull(&reference),
            ConstraintSet::Lambda2Ge { epsilon: 0.3 },
        ];
        for s in &sets {
            let (ra, rb) = (s.residual(&a).unwrap(), s.residual(&b).unwrap());
            prop_assert!((ra - rb).abs() <= 1e-9, "{}: {ra} vs {rb}", s.kind());
        }
    }

    #[test]
    fn exact_projections_are_nonexpansive((x, y) in pair(6, -2.0, 2.0)) {
        let n = x.n();
        let reference = SymMatrix::from_fn(n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let sets = [
            ConstraintSet::unit_box(),
            ConstraintSet::diag_zero(),
            ConstraintSet::DegreeEq { value: 1.0 },
            ConstraintSet::DegreeCap { value: 0.5 },
            ConstraintSet::EdgeSumEq { value: 2.0 },
            ConstraintSet::spectral_hull(&reference).unwrap(),
        ];
        let d = x.dist(&y);
        for s in &sets {
            let (px, py) = (s.project(&x).unwrap(), s.project(&y).unwrap());
            prop_assert!(px.dist(&py) <= d + 1e-9, "{} expands", s.kind());
        }
        let (px, py) = (project_psd(&x).unwrap(), project_psd(&y).unwrap());
        prop_assert!(px.dist(&py) <= d + 1e-9);
    }

    #[test]
    fn vector_projections_are_nonexpansive(
        x in prop::collection::vec(-3.0..3.0f64, 5),
        y in prop::collection::vec(-3.0..3.0f64, 5),
        b in prop::collection::vec(-1.0..1.0f64, 5),
    ) {
        let d = x.iter().zip(&y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let dist = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let (px, py) = (project_simplex(&x), project_simplex(&y));
        prop_assert!(dist(&px, &py) <= d + 1e-12);
        let (px, py) = (project_permutahedron(&x, &b).unwrap(), project_permutahedron(&y, &b).unwrap());
        prop_assert!(dist(&px, &py) <= d + 1e-12);
    }

    #[test]
    fn convex_invariants_satisfy_midpoint((a, b) in pair(6, 0.0, 1.0)) {
        let (a, b) = (zero_diagonal(&a), zero_diagonal(&b));
        let mid = (&a + &b).scaled(0.5);
        let n = a.n();
        let v: Vec<f64> = (0..n).map(|i| (n - i) as f64).collect();
        let checks: Vec<(&str, Box<dyn Fn(&SymMatrix) -> f64>)> = vec![
            ("maxdeg", Box::new(max_degree)),
            ("maxcut", Box::new(|x| maxcut_exact(x).unwrap())),
            ("spectral functional", Box::new(move |x| spectral_functional(&v, x).unwrap())),
        ];
        for (name, f) in &checks {
            prop_assert!(f(&mid) <= 0.5 * (f(&a) + f(&b)) + 1e-12, "{name}");
        }
        if n >= 3 {
            let p = SymMatrix::from_fn(n, |i, j| if i != j && i < 3 && j < 3 { 1.0 } else { 0.0 });
            let t = |x: &SymMatrix| theta_exact(&k3(), x).unwrap().value;
            prop_assert!(t(&mid) <= 0.5 * (t(&a) + t(&b)) + 1e-9);
            let l = |x: &SymMatrix| lambda_bound(&p, x).unwrap();
            prop_assert!(l(&mid) <= 0.5 * (l(&a) + l(&b)) + 1e-9);
            prop_assert!(t(&a) <= l(&a) + 1e-9);
        }
        // The Fiedler value is concave.
        let f = |x: &SymMatrix| fiedler_value(x).unwrap();
        prop_assert!(f(&mid) >= 0.5 * (f(&a) + f(&b)) - 1e-9);
    }
}
