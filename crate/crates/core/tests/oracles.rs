//! Independent oracles for projections, randomness, relaxation chains, and
//! cut validity.

use cvxgraph::graph::{
    clebsch, conjugate, cycle, gaussian_symmetric, random_graph, shrikhande, RngStream,
};
use cvxgraph::invariants::{motzkin_straus, stability_exact};
use cvxgraph::linalg::{majorizes, project_simplex, spectrum};
use cvxgraph::sdp::{certificate_quality, maxcut_dual_certificate, maxcut_sdp, stability_sdp};
use cvxgraph::sets::{dykstra_project, ConstraintSet};
use cvxgraph::{Permutation, SolverConfig, SymMatrix};

#[test]
fn simplex_projection_meets_kkt() {
    let mut rng = RngStream::new(1);
    for _ in 0..200 {
        let x: Vec<f64> = (0..6).map(|_| 2.0 * rng.gaussian()).collect();
        let p = project_simplex(&x);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|&v| v >= 0.0));
        // x - p is constant on the support and no larger off it.
        let tau: Vec<f64> = x
            .iter()
            .zip(&p)
            .filter(|(_, &q)| q > 0.0)
            .map(|(a, q)| a - q)
            .collect();
        let t = tau[0];
        assert!(tau.iter().all(|&s| (s - t).abs() < 1e-12));
        for (a, q) in x.iter().zip(&p) {
            if *q == 0.0 {
                assert!(*a <= t + 1e-12);
            }
        }
    }
}

#[test]
fn random_permutations_are_uniform() {
    // Chi-square over the 6 permutations of 3 items; 5 degrees of freedom,
    // critical value 20.52 at p = 0.001.
    let mut rng = RngStream::new(2);
    let draws = 6000;
    let mut counts = [0usize; 6];
    for _ in 0..draws {
        let p = Permutation::random(&mut rng, 3);
        let s = p.as_slice();
        counts[s[0] * 2 + usize::from(s[1] > s[2])] += 1;
    }
    let expected = draws as f64 / 6.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 20.52, "chi-square {chi2}, counts {counts:?}");
}

#[test]
fn conjugation_preserves_spectrum() {
    let mut rng = RngStream::new(3);
    for a in [
        clebsch(),
        shrikhande(),
        gaussian_symmetric(&mut rng, 9, true),
    ] {
        let b = conjugate(&a, &Permutation::random(&mut rng, a.n())).unwrap();
        let (sa, sb) = (spectrum(&a).unwrap(), spectrum(&b).unwrap());
        assert!(sa.iter().zip(&sb).all(|(x, y)| (x - y).abs() < 1e-10));
    }
}

#[test]
fn stability_chain() {
    let cfg = SolverConfig::default();
    let mut rng = RngStream::new(4);
    for _ in 0..10 {
        let a = random_graph(&mut rng, 6, 0.4);
        let inv_alpha = 1.0 / stability_exact(&a).unwrap() as f64;
        let ms = motzkin_straus(&a, 30, &mut rng).value;
        let sdp = stability_sdp(&a, &cfg).unwrap().value;
        assert!(sdp <= ms + 1e-6, "sdp {sdp} above motzkin {ms}");
        assert!((ms - inv_alpha).abs() < 1e-6);
    }
}

#[test]
fn dual_certificates_are_sound() {
    let cfg = SolverConfig::default();
    for a in [cycle(5), cycle(6), clebsch()] {
        let f = maxcut_sdp(&a, &cfg).unwrap().value;
        let y = maxcut_dual_certificate(&a, f - 1e-3, &cfg)
            .unwrap()
            .expect("certificate below the optimum");
        let (total, lmin) = certificate_quality(&a, &y).unwrap();
        assert!(total >= f - 1e-3 - 1e-7);
        assert!(lmin >= -1e-7);
        // Weak duality: any certificate total bounds f from below.
        assert!(total <= f + 1e-5);
        assert!(maxcut_dual_certificate(&a, f + 0.1, &cfg)
            .unwrap()
            .is_none());
    }
}

#[test]
fn cuts_separate_and_keep_members() {
    let mut rng = RngStream::new(5);
    let lambda = ConstraintSet::Lambda2Ge { epsilon: 1.0 };
    let theta = ConstraintSet::theta_cap(cvxgraph::graph::clique(3), 4.0);
    // Members: complete graphs pass the Fiedler test; bipartite graphs hold
    // no triangle.
    let k6 = cvxgraph::graph::clique(6);
    let k33 = cvxgraph::graph::complete_bipartite(3, 3);
    for _ in 0..20 {
        let x = SymMatrix::from_fn(6, |i, j| if i == j { 0.0 } else { rng.uniform() });
        for (set, member) in [(&lambda, &k6), (&theta, &k33)] {
            if let Some(h) = set.cut_oracle(&x).unwrap() {
                assert!(h.violation(&x) > 0.0);
                assert!(
                    h.violation(member) <= 1e-9,
                    "{} cut removes a member",
                    set.kind()
                );
                assert!(set.residual(&x).unwrap() > 0.0);
            } else {
                assert!(set.residual(&x).unwrap() <= 1e-9);
            }
        }
    }
}

/// Projection onto `box ∩ {Σ_{i<j} X_ij = s, X_ii = 0}`: clamp `X_ij - τ`
/// with `τ` found by bisection.
fn box_edge_sum_oracle(x: &SymMatrix, s: f64) -> SymMatrix {
    let n = x.n();
    let at = |tau: f64| {
        SymMatrix::from_fn(n, |i, j| {
            if i == j {
                0.0
            } else {
                (x.get(i, j) - tau).clamp(0.0, 1.0)
            }
        })
    };
    let total = |m: &SymMatrix| (m.sum() - m.trace()) / 2.0;
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(&at(mid)) > s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

#[test]
fn dykstra_matches_closed_form_intersection() {
    let cfg = SolverConfig {
        feasibility_tol: 1e-10,
        max_cycles: 100_000,
        ..SolverConfig::default()
    };
    let mut rng = RngStream::new(6);
    let sets = [
        ConstraintSet::unit_box(),
        ConstraintSet::diag_zero(),
        ConstraintSet::EdgeSumEq { value: 4.0 },
    ];
    for _ in 0..10 {
        let x = gaussian_symmetric(&mut rng, 6, true);
        let r = dykstra_project(&sets, &x, &cfg).unwrap();
        assert!(r.converged);
        let oracle = box_edge_sum_oracle(&x, 4.0);
        assert!(
            r.point.max_abs_diff(&oracle) < 1e-6,
            "{}",
            r.point.max_abs_diff(&oracle)
        );
    }
}

#[test]
fn spectral_hull_projection_is_majorized() {
    let mut rng = RngStream::new(7);
    let reference = cycle(8);
    let set = ConstraintSet::spectral_hull(&reference).unwrap();
    let bound = spectrum(&reference).unwrap();
    for _ in 0..20 {
        let x = gaussian_symmetric(&mut rng, 8, true);
        let p = set.project(&x).unwrap();
        assert!(majorizes(&bound, &spectrum(&p).unwrap()).unwrap());
        assert!(set.residual(&p).unwrap() < 1e-9);
    }
}
