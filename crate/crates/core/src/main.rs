use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use beamsearch::cli::{execute, parse_spec, ExecuteOptions, ExperimentKind, RawConfig, WORKERS_ENV};
use beamsearch::Error;

/// Local random search for distributed transmit beamforming.
///
/// Each subcommand reads an optional flat `key = value` config file; flags
/// override file values. Results go to `--out` (default
/// `results/<experiment>-<fingerprint>`).
#[derive(Debug, Parser)]
#[command(name = "beamsearch", version, about, long_about = None)]
#[command(after_help = format!("Worker threads: set {WORKERS_ENV} (default: all processors)."))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// A single search run, with its full trace.
    Run(Overrides),
    /// Repeated runs from random starting points (convergence curve).
    Converge(Overrides),
    /// Mean hitting time versus number of transmitters, with a line fit.
    Scaling(Overrides),
    /// Mean hitting time versus update percentage rho.
    AsyncSweep(Overrides),
    /// Empirical probability that one perturbation improves the objective.
    ImproveProb(Overrides),
}

#[derive(Debug, Args)]
struct Overrides {
    /// Config file (flat key = value text).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of transmitters; comma-separated list for `scaling`.
    #[arg(long)]
    n: Option<String>,
    /// Update percentage in (0, 100]; comma-separated list for `async-sweep`.
    #[arg(long)]
    rho: Option<String>,
    /// Converged once f >= alpha * f_max.
    #[arg(long)]
    alpha: Option<String>,
    /// Converged once f > f_max - epsilon.
    #[arg(long)]
    epsilon: Option<String>,
    /// Half-width of the uniform perturbation, degrees.
    #[arg(long = "delta0-deg")]
    delta0_deg: Option<String>,
    /// Measure shift: none | random | degrees | per-transmitter list.
    #[arg(long = "shift-deg", allow_hyphen_values = true)]
    shift_deg: Option<String>,
    /// snr | modpi
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    /// Channel draws per N (`scaling`).
    #[arg(long)]
    channels: Option<String>,
    /// Iterations per run, or `auto` for 200 N / p.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Perturbations per state (`improve-prob`).
    #[arg(long)]
    samples: Option<String>,
    /// random | zeros
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Keep iterating after the stop criterion is first met.
    #[arg(long)]
    continue_after_hit: bool,
    /// Write trace_<run_id>.csv for every run.
    #[arg(long)]
    traces: bool,
    /// Replace results of an earlier run in the output directory.
    #[arg(long)]
    overwrite: bool,
}

impl Overrides {
    fn to_raw(&self, kind: ExperimentKind) -> Result<RawConfig, Error> {
        let mut raw = RawConfig::default();
        raw.set("experiment", kind.as_str())?;
        let pairs = [
            ("n", &self.n),
            ("rho", &self.rho),
            ("alpha", &self.alpha),
            ("epsilon", &self.epsilon),
            ("delta0_deg", &self.delta0_deg),
            ("shift_deg", &self.shift_deg),
            ("objective", &self.objective),
            ("runs", &self.runs),
            ("channels", &self.channels),
            ("budget", &self.budget),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("init", &self.init),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v.as_str())?;
            }
        }
        if self.continue_after_hit {
            raw.set("continue_after_hit", "true")?;
        }
        if self.traces {
            raw.set("traces", "true")?;
        }
        Ok(raw)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Run(a) => (ExperimentKind::Run, a),
        Command::Converge(a) => (ExperimentKind::Converge, a),
        Command::Scaling(a) => (ExperimentKind::Scaling, a),
        Command::AsyncSweep(a) => (ExperimentKind::AsyncSweep, a),
        Command::ImproveProb(a) => (ExperimentKind::ImproveProb, a),
    };

    let spec = match load_spec(kind, args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = ExecuteOptions {
        overwrite: args.overwrite,
        workers: None,
    };
    match execute(&spec, &opts) {
        Ok(report) => {
            println!(
                "{} finished: fingerprint {}, {} workers, output in {}",
                kind,
                report.fingerprint,
                report.workers,
                report.out_dir.display()
            );
            if let Ok(summary) = std::fs::read_to_string(report.out_dir.join("summary.csv")) {
                print!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_spec(kind: ExperimentKind, args: &Overrides) -> Result<beamsearch::cli::ExperimentSpec, Error> {
    let text = match &args.config {
        Some(p) => std::fs::read_to_string(p)?,
        None => String::new(),
    };
    parse_spec(&text, &args.to_raw(kind)?)
}
