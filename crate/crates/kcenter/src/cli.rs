//! `kcenter solve | fft | oracle`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kcenter_core::bounds::evaluate_indices;
use kcenter_core::heuristic::fft;
use kcenter_core::oracle::DEFAULT_LIMIT;
use kcenter_core::{
    brute_force, fft_multistart, solve_with, Dataset, SolverConfig, Termination,
    TraceRecord,
};

use crate::csv::load_csv;
use crate::pool::{ThreadPoolExecutor, WallClock};
use crate::report::{ConfigEcho, DatasetInfo, Report};
use crate::synth::SyntheticSpec;

#[derive(Debug, Parser)]
#[command(name = "kcenter", version, about = "Exact K-center clustering with centers on samples")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Debug, Subcommand)]
enum Mode {
    /// Branch and bound to a certified gap.
    Solve(SolveArgs),
    /// Farthest-first traversal from seeded random starts.
    Fft(FftArgs),
    /// Exhaustive search over all center subsets.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct Input {
    /// Numeric CSV file.
    #[arg(long, group = "source")]
    csv: Option<PathBuf>,
    /// Gaussian mixture, e.g. n=300,k=3,a=2,seed=7.
    #[arg(long, group = "source", value_parser = parse_synthetic)]
    synthetic: Option<SyntheticSpec>,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    input: Input,
    /// Skip the first line of the CSV file.
    #[arg(long)]
    header: bool,
    /// Number of clusters.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 10)]
    i_sr: u64,
    #[arg(long, default_value_t = 50)]
    ball_threshold: usize,
    #[arg(long, default_value_t = 10)]
    rep_cap: usize,
    #[arg(long, default_value_t = 1)]
    fft_trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 10_000_000)]
    max_nodes: usize,
    #[arg(long)]
    no_bt: bool,
    #[arg(long)]
    no_assign: bool,
    #[arg(long)]
    no_reduce: bool,
    #[arg(long)]
    no_symmetry: bool,
    /// Per-iteration trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FftArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run a single traversal from this sample instead.
    #[arg(long)]
    start: Option<usize>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Maximum number of center subsets.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u128,
}

fn parse_synthetic(s: &str) -> Result<SyntheticSpec, String> {
    s.parse().map_err(|e: crate::DataError| e.to_string())
}

/// Exit status: 0 when solved, 2 on time limit, 1 on bad input.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.mode) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

type BoxError = Box<dyn std::error::Error>;

fn load(c: &Common) -> Result<(Dataset, String), BoxError> {
    match (&c.input.csv, &c.input.synthetic) {
        (Some(p), _) => Ok((load_csv(p, c.header)?, p.display().to_string())),
        (None, Some(s)) => Ok((
            s.generate()?,
            format!("synthetic:n={},k={},a={},seed={}", s.n, s.k, s.a, s.seed),
        )),
        (None, None) => Err("no input".into()),
    }
}

fn emit(c: &Common, report: &Report) -> Result<(), BoxError> {
    let json = report.to_json();
    match &c.out {
        Some(p) => std::fs::write(p, json)?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn info(d: &Dataset, k: usize) -> DatasetInfo {
    DatasetInfo {
        s: d.n_samples(),
        a: d.n_attrs(),
        k,
    }
}

fn execute(mode: Mode) -> Result<i32, BoxError> {
    match mode {
        Mode::Solve(a) => solve_mode(a),
        Mode::Fft(a) => {
            let (d, input) = load(&a.common)?;
            let k = a.common.k as usize;
            let clock = WallClock::start();
            let (centers, ub) = match a.start {
                Some(s) => {
                    let c = fft(&d, k, s)?;
                    let all: Vec<usize> = (0..d.n_samples()).collect();
                    let v = evaluate_indices(&d, c.indices(), &all);
                    (c, v)
                }
                None => fft_multistart(&d, k, a.trials, a.seed)?,
            };
            let cfg = SolverConfig {
                seed: a.seed,
                ..SolverConfig::default()
            };
            let mut config = ConfigEcho::new("fft", input, &cfg);
            config.trials = Some(if a.start.is_some() { 1 } else { a.trials });
            let report = Report {
                ub,
                lb: None,
                gap_pct: None,
                nodes: 0,
                wall_time_s: clock_secs(&clock),
                termination: "heuristic",
                incumbent: centers.0,
                config,
                dataset: info(&d, k),
                seeds: None,
                samples_removed: None,
            };
            emit(&a.common, &report)?;
            Ok(0)
        }
        Mode::Oracle(a) => {
            let (d, input) = load(&a.common)?;
            let k = a.common.k as usize;
            let clock = WallClock::start();
            let r = brute_force(&d, k, a.limit)?;
            let mut config = ConfigEcho::new("oracle", input, &SolverConfig::default());
            config.limit = Some(a.limit);
            let report = Report {
                ub: r.opt_value,
                lb: Some(r.opt_value),
                gap_pct: Some(0.0),
                nodes: 0,
                wall_time_s: clock_secs(&clock),
                termination: "exhaustive",
                incumbent: r.opt_centers.0,
                config,
                dataset: info(&d, k),
                seeds: None,
                samples_removed: None,
            };
            emit(&a.common, &report)?;
            Ok(0)
        }
    }
}

fn clock_secs(c: &WallClock) -> f64 {
    use kcenter_core::Clock;
    c.elapsed()
}

fn solve_mode(a: SolveArgs) -> Result<i32, BoxError> {
    let (d, input) = load(&a.common)?;
    let k = a.common.k as usize;
    let cfg = SolverConfig {
        epsilon_rel: a.eps,
        time_limit: a.time_limit,
        i_sr: a.i_sr,
        ball_threshold: a.ball_threshold,
        rep_cap: a.rep_cap,
        fft_trials: a.fft_trials,
        seed: a.seed,
        workers: a.workers,
        bounds_tightening: !a.no_bt,
        assignment: !a.no_assign,
        reduction: !a.no_reduce,
        symmetry: !a.no_symmetry,
        max_open_nodes: a.max_nodes,
    };
    cfg.validate()?;
    let exec = ThreadPoolExecutor::new(cfg.workers)?;
    let mut trace_out = match &a.trace {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            writeln!(w, "iteration,beta,alpha,open_nodes,samples_active")?;
            Some(w)
        }
        None => None,
    };
    let mut trace_err = None;
    let mut sink = |t: &TraceRecord| {
        if let Some(w) = trace_out.as_mut() {
            if let Err(e) = writeln!(
                w,
                "{},{:?},{:?},{},{}",
                t.iteration, t.beta, t.alpha, t.open_nodes, t.samples_active
            ) {
                trace_err.get_or_insert(e);
            }
        }
    };
    let clock = WallClock::start();
    let r = solve_with(&exec, &clock, &d, k, &cfg, &mut sink)?;
    if let Some(e) = trace_err {
        return Err(e.into());
    }
    if let Some(mut w) = trace_out {
        w.flush()?;
    }
    let report = Report::from_solve(&r, ConfigEcho::new("solve", input, &cfg), info(&d, k));
    emit(&a.common, &report)?;
    Ok(match r.termination {
        Termination::TimeLimit => 2,
        Termination::Gap | Termination::QueueEmpty => 0,
    })
}
