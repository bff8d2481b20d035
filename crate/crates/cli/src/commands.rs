use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use cvxgraph::apps::{deconvolve, generate, hypothesis_test};
use cvxgraph::graph::{conjugate, load_graph, serialize_graph, trial_seed, zero_pad, Graph};
use cvxgraph::invariants::{
    degree_sequence, edge_sum, fiedler_value, isoperimetric_exact, lambda_bound, laplacian,
    max_degree, maxcut_exact, motzkin_straus, stability_exact, theta_exact, PatternSupport,
};
use cvxgraph::linalg::spectrum;
use cvxgraph::sdp::{maxcut_sdp, maxcut_upper_bound};
use cvxgraph::sets::{load_constraints, ConstraintSet};
use cvxgraph::{Permutation, RngStream, SolverConfig, SymMatrix};

use crate::cli::{
    Cli, Command, DeconvolveArgs, GenerateArgs, HypotestArgs, InvariantArgs, InvariantName,
    SolverArgs, TrialArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{g12, write_atomic, Csv};

/// Entries above this count as edges in the nonzero-per-node statistic.
const NONZERO_THRESHOLD: f64 = 1e-3;

const PRESETS: [(&str, &str); 3] = [
    ("expander", include_str!("../presets/expander.json")),
    (
        "cycle-family-16",
        include_str!("../presets/cycle-family-16.json"),
    ),
    (
        "connected-family-16",
        include_str!("../presets/connected-family-16.json"),
    ),
];

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Invariant(a) => cmd_invariant(&a),
        Command::Deconvolve(a) => cmd_deconvolve(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Hypotest(a) => cmd_hypotest(&a),
    }
}

/// Which solver knobs `--max-iter` and `--tol` override.
enum Loop {
    Admm,
    Deconvolution,
    Ascent,
}

fn solver_config(args: &SolverArgs, which: Loop) -> CliResult<SolverConfig> {
    let mut cfg = SolverConfig::default();
    if let Some(m) = args.max_iter {
        match which {
            Loop::Admm => cfg.admm_max_iter = m,
            Loop::Deconvolution => cfg.max_iter = m,
            Loop::Ascent => cfg.ascent_iter = m,
        }
    }
    if let Some(t) = args.tol {
        match which {
            Loop::Admm => cfg.admm_tol = t,
            Loop::Deconvolution => cfg.objective_tol = t,
            Loop::Ascent => cfg.feasibility_tol = t,
        }
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn constraints_text(spec: &str) -> CliResult<String> {
    if let Some(name) = spec.strip_prefix("preset:") {
        return PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}`")));
    }
    fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("cannot read `{spec}`: {e}")))
}

fn load_family(spec: &str) -> CliResult<(usize, Vec<ConstraintSet>)> {
    Ok(load_constraints(&constraints_text(spec)?)?)
}

fn print_values(values: &[f64]) {
    let line: Vec<String> = values.iter().map(|&v| g12(v)).collect();
    println!("{}", line.join(" "));
}

fn cmd_invariant(args: &InvariantArgs) -> CliResult<()> {
    let a = load_graph(&args.graph)?.adjacency;
    let pattern = || -> CliResult<SymMatrix> {
        let spec = args
            .pattern
            .as_deref()
            .ok_or_else(|| CliError::Usage("this invariant needs --pattern".into()))?;
        Ok(load_graph(spec)?.adjacency)
    };
    let value = match args.name {
        InvariantName::Edges => edge_sum(&a),
        InvariantName::Maxdeg => max_degree(&a),
        InvariantName::Maxcut => maxcut_exact(&a)?,
        InvariantName::MaxcutSdp => {
            let cfg = solver_config(&args.solver, Loop::Admm)?;
            let f = maxcut_sdp(&a, &cfg)?;
            println!("{}", g12(maxcut_upper_bound(&a, f.value)));
            if !f.converged() {
                return Err(CliError::NonConvergence {
                    what: "semidefinite solves",
                    failed: 1,
                    total: 1,
                });
            }
            return Ok(());
        }
        InvariantName::Cheeger => isoperimetric_exact(&a)?,
        InvariantName::Stability => stability_exact(&a)? as f64,
        InvariantName::Motzkin => {
            let cfg = SolverConfig::default();
            let mut rng = RngStream::new(args.seed);
            motzkin_straus(&a, cfg.restarts, &mut rng).value
        }
        InvariantName::Theta => theta_exact(&PatternSupport::new(pattern()?), &a)?.value,
        InvariantName::LambdaBound => lambda_bound(&zero_pad(&pattern()?, a.n())?, &a)?,
        InvariantName::Fiedler => fiedler_value(&a)?,
        InvariantName::Degseq => {
            print_values(&degree_sequence(&a).sorted);
            return Ok(());
        }
        InvariantName::Spectrum => {
            print_values(&spectrum(&a)?);
            return Ok(());
        }
    };
    println!("{}", g12(value));
    Ok(())
}

/// Runs `f` on every trial index over `jobs` scoped workers and returns the
/// results in trial order.
fn run_trials<R: Send>(
    trials: u64,
    jobs: Option<u64>,
    f: impl Fn(u64) -> CliResult<R> + Sync,
) -> CliResult<Vec<R>> {
    let workers = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get() as u64))
        .min(trials);
    let next = AtomicU64::new(0);
    let slots: Vec<Mutex<Option<CliResult<R>>>> = (0..trials).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= trials {
                    break;
                }
                let r = f(i);
                *slots[i as usize].lock().expect("slot lock") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every trial ran"))
        .collect()
}

fn emit_csv(trials: &TrialArgs, csv: Csv) -> CliResult<()> {
    match &trials.out {
        Some(path) => write_atomic(path, &csv.into_string()),
        None => {
            print!("{}", csv.into_string());
            Ok(())
        }
    }
}

fn elapsed(trials: &TrialArgs, ms: u64) -> String {
    if trials.no_timing { 0 } else { ms }.to_string()
}

/// Errors when more than half of `total` runs failed to converge.
fn check_convergence(what: &'static str, failed: u64, total: u64) -> CliResult<()> {
    if 2 * failed > total {
        Err(CliError::NonConvergence {
            what,
            failed,
            total,
        })
    } else {
        Ok(())
    }
}

fn cmd_deconvolve(args: &DeconvolveArgs) -> CliResult<()> {
    let cfg = solver_config(&args.solver, Loop::Deconvolution)?;
    let g1 = load_graph(&args.g1)?.adjacency;
    let g2 = load_graph(&args.g2)?.adjacency;
    if g1.n() != g2.n() {
        return Err(CliError::Usage(format!(
            "graphs have {} and {} nodes",
            g1.n(),
            g2.n()
        )));
    }
    let n = g1.n();
    let c1 = [
        ConstraintSet::unit_box(),
        ConstraintSet::spectral_hull(&g1)?,
    ];
    let c2 = [
        ConstraintSet::unit_box(),
        ConstraintSet::spectral_hull(&g2)?,
    ];
    let t = &args.trials;
    let reports = run_trials(t.trials, t.jobs, |i| {
        let mut rng = RngStream::for_trial(t.seed, i);
        let (p1, p2) = if args.identity {
            (Permutation::identity(n), Permutation::identity(n))
        } else {
            let p1 = Permutation::random(&mut rng, n);
            (p1, Permutation::random(&mut rng, n))
        };
        let a1 = conjugate(&g1, &p1)?;
        let a = &a1 + &conjugate(&g2, &p2)?;
        let mut report = deconvolve(&a, &c1, &c2, &cfg, Some(&a1))?.report;
        report.trial_index = i;
        report.seed = rng.seed();
        Ok(report)
    })?;

    let mut csv = Csv::new(&[
        "trial",
        "seed",
        "success",
        "recovery_error_inf",
        "iterations",
        "elapsed_ms",
    ]);
    for r in &reports {
        csv.row(&[
            r.trial_index.to_string(),
            r.seed.to_string(),
            r.success.to_string(),
            g12(r.recovery_error_inf),
            r.iterations.to_string(),
            elapsed(t, r.elapsed_ms),
        ]);
    }
    emit_csv(t, csv)?;
    let successes = reports.iter().filter(|r| r.success).count();
    println!("successes {successes}/{}", t.trials);
    let failed = reports.iter().filter(|r| !r.converged).count() as u64;
    check_convergence("trials", failed, t.trials)
}

/// Second-smallest Laplacian eigenvalue, without the sign check of
/// `fiedler_value`: projected points may carry entries a hair below zero.
fn laplacian_lambda2(x: &SymMatrix) -> CliResult<f64> {
    if x.n() < 2 {
        return Err(CliError::Usage("graphs need at least two nodes".into()));
    }
    Ok(spectrum(&laplacian(x))?[x.n() - 2])
}

fn degree_target(sets: &[ConstraintSet]) -> Option<f64> {
    sets.iter().find_map(|s| match s {
        ConstraintSet::DegreeEq { value } => Some(*value),
        _ => None,
    })
}

struct GeneratedRow {
    seed: u64,
    graph: SymMatrix,
    degree_deviation: f64,
    fiedler: f64,
    nonzero_per_node: f64,
    elapsed_ms: u64,
    converged: bool,
}

fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let cfg = solver_config(&args.solver, Loop::Ascent)?;
    let (n, sets) = load_family(&args.constraints)?;
    let target = degree_target(&sets);
    let t = &args.trials;
    let rows = run_trials(t.trials, t.jobs, |i| {
        let mut rng = RngStream::for_trial(t.seed, i);
        let g = generate(&sets, n, &mut rng, &cfg)?;
        let x = g.graph;
        let degrees = x.row_sums();
        let degree_deviation = match target {
            Some(d) => degrees.iter().map(|v| (v - d).abs()).fold(0.0, f64::max),
            None => {
                let hi = degrees.iter().cloned().fold(f64::MIN, f64::max);
                hi - degrees.iter().cloned().fold(f64::MAX, f64::min)
            }
        };
        let nonzero = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| r != c && x.get(r, c).abs() > NONZERO_THRESHOLD)
            .count();
        Ok(GeneratedRow {
            seed: trial_seed(t.seed, i),
            degree_deviation,
            fiedler: laplacian_lambda2(&x)?,
            nonzero_per_node: nonzero as f64 / n as f64,
            elapsed_ms: g.report.elapsed_ms,
            converged: g.report.converged,
            graph: x,
        })
    })?;

    let mut csv = Csv::new(&[
        "trial",
        "seed",
        "degree_deviation",
        "fiedler",
        "nonzero_per_node",
        "elapsed_ms",
    ]);
    for (i, r) in rows.iter().enumerate() {
        csv.row(&[
            i.to_string(),
            r.seed.to_string(),
            g12(r.degree_deviation),
            g12(r.fiedler),
            g12(r.nonzero_per_node),
            elapsed(t, r.elapsed_ms),
        ]);
    }
    if let Some(dir) = &args.emit_graph {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.clone(),
            source,
        })?;
        for (i, r) in rows.iter().enumerate() {
            let g = Graph::named(r.graph.clone(), format!("trial {i} seed {}", r.seed));
            write_atomic(&dir.join(format!("trial_{i:04}.txt")), &serialize_graph(&g))?;
        }
    }
    emit_csv(t, csv)?;
    let count = rows.len() as f64;
    let max_dev = rows.iter().map(|r| r.degree_deviation).fold(0.0, f64::max);
    let min_fiedler = rows.iter().map(|r| r.fiedler).fold(f64::INFINITY, f64::min);
    let mean_nz = rows.iter().map(|r| r.nonzero_per_node).sum::<f64>() / count;
    println!(
        "trials {} max_degree_deviation {} min_fiedler {} mean_nonzero_per_node {}",
        rows.len(),
        g12(max_dev),
        g12(min_fiedler),
        g12(mean_nz)
    );
    let failed = rows.iter().filter(|r| !r.converged).count() as u64;
    check_convergence("trials", failed, t.trials)
}

fn write_graph(dir: &Path, file: &str, m: &SymMatrix, label: &str) -> CliResult<()> {
    write_atomic(
        &dir.join(file),
        &serialize_graph(&Graph::named(m.clone(), label)),
    )
}

fn cmd_hypotest(args: &HypotestArgs) -> CliResult<()> {
    let cfg = solver_config(&args.solver, Loop::Ascent)?;
    let a = load_graph(&args.graph)?.adjacency;
    let (n1, c1) = load_family(&args.constraints[0])?;
    let (n2, c2) = load_family(&args.constraints[1])?;
    if n1 != a.n() || n2 != a.n() {
        return Err(CliError::Usage(format!(
            "sample has {} nodes but the families expect {n1} and {n2}",
            a.n()
        )));
    }
    let h = hypothesis_test(&a, &c1, &c2, &cfg)?;
    if let Some(dir) = &args.emit_graph {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.clone(),
            source,
        })?;
        write_graph(dir, "m1.txt", &h.m1, "family 1 maximizer")?;
        write_graph(dir, "m2.txt", &h.m2, "family 2 maximizer")?;
    }
    println!("score1 {}", g12(h.score1));
    println!("score2 {}", g12(h.score2));
    println!("winner {}", h.winner);
    if h.tie {
        eprintln!("warning: scores tie within {}", cvxgraph::apps::TIE_TOL);
    }
    if !h.converged {
        return Err(CliError::NonConvergence {
            what: "family maximizations",
            failed: 1,
            total: 1,
        });
    }
    Ok(())
}
