use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use isci_core::{
    bonferroni_bounds, compatible_sci, fallback_bounds, Bounds, BoundsSolver, FallbackSpec, Graph,
    Normal, Shifts, SolverOptions,
};
use isci_sim::{
    calibrate_information_weight, power_design, run_scenario_with, scenario_curve,
    write_curve_csv, write_result_csv, QSpec, RunOptions, Scenario,
};

#[derive(Parser)]
#[command(name = "isci", version, about = "Informative simultaneous confidence intervals for graphical tests")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a graph file and print the validation report.
    Validate { graph: PathBuf },
    /// Compute lower confidence bounds for one set of estimates.
    Bounds(BoundsArgs),
    /// Run a Monte Carlo scenario and write CSV summaries.
    Simulate(SimulateArgs),
    /// Trial design arithmetic: information, level for a larger effect, q.
    Calibrate(CalibrateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Method {
    Isci,
    Bonferroni,
    Fallback,
    Csci,
}

#[derive(clap::Args)]
struct BoundsArgs {
    graph: PathBuf,
    /// JSON with `estimates`, `se` and optional `shifts` and `q`.
    estimates: PathBuf,
    #[arg(long, value_enum, default_value = "isci")]
    method: Method,
    /// Overall level; initial levels are rescaled proportionally.
    #[arg(long)]
    alpha: Option<f64>,
    /// Uniform information weight, overriding the estimates file.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    scenario: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_sims: Option<usize>,
    #[arg(long, env = "ISCI_THREADS")]
    threads: Option<usize>,
    /// Information weight for the sweep targets (all hypotheses without a sweep).
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Run every q of the scenario's sweep and write a curve CSV.
    #[arg(long)]
    curve: bool,
}

#[derive(clap::Args)]
struct CalibrateArgs {
    /// Local level of the non-inferiority hypothesis.
    #[arg(long)]
    alpha: f64,
    /// Type II error.
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    /// Non-inferiority margin the trial is powered for.
    #[arg(long)]
    delta: f64,
    /// Larger effect for which the level giving the same power is reported.
    #[arg(long)]
    effect: Option<f64>,
}

#[derive(Deserialize)]
struct EstimatesFile {
    estimates: Vec<f64>,
    se: Vec<f64>,
    #[serde(default)]
    shifts: Option<Vec<f64>>,
    #[serde(default)]
    q: Option<QSpec>,
}

/// Error carrying the process exit code.
struct Fail {
    code: u8,
    err: anyhow::Error,
}

fn invalid(err: impl Into<anyhow::Error>) -> Fail {
    Fail { code: 1, err: err.into() }
}

fn input(err: impl Into<anyhow::Error>) -> Fail {
    Fail { code: 2, err: err.into() }
}

fn numeric(err: impl Into<anyhow::Error>) -> Fail {
    Fail { code: 3, err: err.into() }
}

type CmdResult = Result<(), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Validate { graph } => cmd_validate(&graph),
        Cmd::Bounds(a) => cmd_bounds(&a),
        Cmd::Simulate(a) => cmd_simulate(&a),
        Cmd::Calibrate(a) => cmd_calibrate(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Fail> {
    let text = fs::read_to_string(path).map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(anyhow!("{}: {e}", path.display())))
}

fn cmd_validate(path: &Path) -> CmdResult {
    let g: Graph = read_json(path)?;
    let report = g.validate();
    println!("{report}");
    if report.is_valid() {
        Ok(())
    } else {
        Err(invalid(anyhow!("graph {} is invalid", path.display())))
    }
}

fn rescale(g: &Graph, alpha: f64) -> Result<Graph, Fail> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(input(anyhow!("--alpha {alpha} not in (0, 1)")));
    }
    let f = alpha / g.alpha();
    Graph::new(
        g.labels().to_vec(),
        alpha,
        g.initial_levels().iter().map(|a| a * f).collect(),
        g.transitions().to_vec(),
    )
    .map_err(input)
}

fn bound_json(x: f64) -> Value {
    if x == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(x)
    }
}

fn cmd_bounds(a: &BoundsArgs) -> CmdResult {
    let mut g: Graph = read_json(&a.graph)?;
    if let Some(alpha) = a.alpha {
        g = rescale(&g, alpha)?;
    }
    let report = g.validate();
    if !report.is_valid() {
        return Err(invalid(anyhow!("graph {}: {report}", a.graph.display())));
    }
    let est: EstimatesFile = read_json(&a.estimates)?;
    let m = g.size();
    if est.estimates.len() != m || est.se.len() != m {
        return Err(input(anyhow!(
            "graph has {m} hypotheses but {} estimates and {} standard errors",
            est.estimates.len(),
            est.se.len()
        )));
    }
    let shifts = match &est.shifts {
        Some(d) => Shifts::new(d.clone()).map_err(input)?,
        None => Shifts::zero(m),
    };
    if shifts.len() != m {
        return Err(input(anyhow!("shifts must have {m} entries")));
    }
    let models = est
        .estimates
        .iter()
        .zip(&est.se)
        .zip(shifts.offsets())
        .map(|((&t, &s), &d)| Normal::new(t + d, s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input)?;

    let q = a.q.map(QSpec::Uniform).or(est.q.clone());
    let needs_q = matches!(a.method, Method::Isci | Method::Fallback);
    if !needs_q && a.q.is_some() {
        eprintln!("warning: --q is ignored by method {:?}", a.method);
    }
    let mut opts = SolverOptions::default();
    if let Some(e) = a.eps {
        opts.eps = e;
    }
    if let Some(n) = a.max_iter {
        opts.max_iter = n;
    }
    let get_q = || q.clone().ok_or_else(|| input(anyhow!("method needs an information weight (--q)")));

    let (bounds, iterations): (Bounds, usize) = match a.method {
        Method::Isci => {
            let w = get_q()?.to_weights();
            let mut solver = BoundsSolver::new(&g, w, opts).map_err(input)?;
            let (b, trace) = solver.solve(&models).map_err(numeric)?;
            if !trace.converged {
                return Err(numeric(anyhow!(
                    "no convergence after {} iterations (last step norm {:e})",
                    trace.iterations,
                    trace.step_norm
                )));
            }
            (b, trace.iterations)
        }
        Method::Bonferroni => (
            bonferroni_bounds(&models, g.initial_levels()).map_err(numeric)?,
            0,
        ),
        Method::Csci => (compatible_sci(&g, &models).map_err(numeric)?, 0),
        Method::Fallback => {
            let q = match get_q()? {
                QSpec::Uniform(q) => q,
                QSpec::PerHypothesis(_) => {
                    return Err(input(anyhow!("fallback bounds take a single q")))
                }
            };
            let chain = Graph::fallback(g.alpha(), g.initial_levels().to_vec()).map_err(input)?;
            if chain.transitions() != g.transitions() {
                return Err(input(anyhow!("graph is not a fallback chain")));
            }
            let spec = FallbackSpec::from_levels(g.alpha(), g.initial_levels(), q).map_err(input)?;
            (
                fallback_bounds(&spec, &models, g.alpha(), opts.root_tol).map_err(numeric)?,
                m,
            )
        }
    };
    let rejected = bounds.rejected();
    let original = bounds.to_original(&shifts);
    let method = format!("{:?}", a.method).to_lowercase();
    let out = json!({
        "method": method,
        "L": original.lower.iter().map(|&x| bound_json(x)).collect::<Vec<_>>(),
        "rejected": rejected,
        "iterations": iterations,
    });
    let text = serde_json::to_string_pretty(&out).map_err(numeric)?;
    match &a.out {
        Some(p) => fs::write(p, text + "\n").map_err(input)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn file_stem(s: &Scenario, path: &Path) -> String {
    s.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|x| x.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into())
    })
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let mut s: Scenario = read_json(&a.scenario)?;
    if let Some(seed) = a.seed {
        s.seed = seed;
    }
    if let Some(n) = a.n_sims {
        s.n_sims = n;
    }
    if let Some(e) = a.eps {
        s.solver.eps = e;
    }
    if let Some(n) = a.max_iter {
        s.solver.max_iter = n;
    }
    if let Some(q) = a.q {
        s = if s.sweep.is_some() {
            s.with_q(q)
        } else {
            Scenario {
                q: QSpec::Uniform(q),
                ..s
            }
        };
    }
    s.validate().map_err(input)?;
    fs::create_dir_all(&a.out).map_err(input)?;
    let stem = file_stem(&s, &a.scenario);
    let threads = a.threads.filter(|&t| t > 0);

    if a.curve {
        if s.sweep.is_none() {
            return Err(input(anyhow!("scenario has no sweep for --curve")));
        }
        eprintln!("{stem}: {} q values x {} replications", s.sweep.as_ref().map_or(0, |w| w.q_grid.len()), s.n_sims);
        let points = scenario_curve(&s, threads).map_err(numeric)?;
        for p in &points {
            eprintln!("  q = {:e}: {} failures", p.q, p.result.failures);
            write_csv(&a.out.join(format!("{stem}_q{}.csv", p.q)), |f| write_result_csv(f, &p.result))?;
        }
        write_csv(&a.out.join(format!("{stem}_curve.csv")), |f| write_curve_csv(f, &points))?;
    } else {
        eprintln!("{stem}: {} replications", s.n_sims);
        let opts = RunOptions {
            threads,
            focus: s.sweep.as_ref().and_then(|w| w.targets.clone()),
        };
        let r = run_scenario_with(&s, &opts).map_err(numeric)?;
        eprintln!("  {} used, {} failures", r.n_used, r.failures);
        write_csv(&a.out.join(format!("{stem}.csv")), |f| write_result_csv(f, &r))?;
        let json = serde_json::to_string_pretty(&r).map_err(numeric)?;
        fs::write(a.out.join(format!("{stem}.json")), json + "\n").map_err(input)?;
    }
    Ok(())
}

fn write_csv(
    path: &Path,
    f: impl FnOnce(BufWriter<File>) -> isci_sim::SimResult<()>,
) -> CmdResult {
    let file = File::create(path).map_err(|e| input(anyhow!("{}: {e}", path.display())))?;
    f(BufWriter::new(file)).map_err(input)
}

fn cmd_calibrate(a: &CalibrateArgs) -> CmdResult {
    let d = power_design(a.alpha, a.beta, a.delta).map_err(input)?;
    let mut out = json!({
        "information": d.information,
        "stderr": d.stderr(),
    });
    if let Some(e) = a.effect {
        let alpha_e = d.alpha_for_effect(e);
        let q = calibrate_information_weight(alpha_e, a.alpha, a.delta).map_err(input)?;
        out["alpha_effect"] = json!(alpha_e);
        out["q"] = json!(q);
    }
    println!("{}", serde_json::to_string_pretty(&out).map_err(numeric)?);
    Ok(())
}
