use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;

use super::output::{curve_csv, runs_csv, summary_csv, SummaryRow};
use super::spec::{ExperimentKind, ExperimentSpec, InitSelector, ObjectiveSelector, ShiftSetting, Threshold};
use crate::error::{Error, Result};
use crate::experiments::{
    async_sweep, fingerprint, improvement_probability_estimate, monte_carlo_convergence,
    scaling_study, Budget, MeasureSpec, ObjectiveSpec, RunRecord, SampleStats, SearchTemplate,
    ShiftRule,
};
use crate::model::{check_origin_interior, deg_to_rad, OriginCheck, PhaseState, UpdateSchedule};
use crate::rng::{derive_seed, rng_from_seed, Stream};
use crate::search::{InitialState, SearchConfig, StopCriterion};

/// Environment variable selecting the number of worker threads.
pub const WORKERS_ENV: &str = "BEAMSEARCH_WORKERS";

/// Upper bound on attempts to draw a start outside the convergence region for
/// `improve-prob`.
const MAX_STATE_DRAWS: usize = 10_000;

#[derive(Debug, Clone, Default)]
pub struct ExecuteOptions {
    /// Replace the files of an earlier run in the output directory.
    pub overwrite: bool,
    /// Worker threads; `None` reads [`WORKERS_ENV`], then falls back to the
    /// number of available processors.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ExecutionReport {
    pub out_dir: PathBuf,
    pub fingerprint: String,
    pub files: Vec<PathBuf>,
    pub workers: usize,
}

pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::invalid(WORKERS_ENV, v, "integer >= 1")),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Search template for `spec` with update percentage `rho`.
pub fn build_template(spec: &ExperimentSpec, rho: f64) -> Result<SearchTemplate> {
    let objective = match spec.objective {
        ObjectiveSelector::Snr => ObjectiveSpec::Snr {
            signal_power: spec.signal_power,
            noise_power: spec.noise_power,
        },
        ObjectiveSelector::ModPi => ObjectiveSpec::ModPiQuadratic,
    };
    let shift = match &spec.shift {
        ShiftSetting::None => ShiftRule::None,
        ShiftSetting::Random => ShiftRule::RandomHalfWidth,
        ShiftSetting::Constant(c) => ShiftRule::Constant(deg_to_rad(*c)),
        ShiftSetting::PerCoordinate(v) => {
            ShiftRule::PerCoordinate(v.iter().map(|&c| deg_to_rad(c)).collect())
        }
    };
    let stop = match spec.threshold {
        Threshold::Alpha(a) => StopCriterion::alpha(a)?,
        Threshold::Epsilon(e) => StopCriterion::epsilon(e)?,
    };
    Ok(SearchTemplate {
        objective,
        measure: MeasureSpec::Uniform {
            half_width: deg_to_rad(spec.delta0_deg),
            shift,
        },
        schedule: UpdateSchedule::from_rho(rho)?,
        initial: match spec.init {
            InitSelector::Random => InitialState::UniformRandom,
            InitSelector::Zeros => InitialState::Zeros,
        },
        stop,
        budget: spec.budget.map_or(Budget::Default, Budget::Fixed),
        halt_on_hit: !spec.continue_after_hit,
    })
}

fn network_config(template: &SearchTemplate, n: usize, seed: u64) -> Result<SearchConfig> {
    let path = [n as u64, 0];
    template.instantiate(
        n,
        derive_seed(seed, Stream::Channel, &path),
        derive_seed(seed, Stream::Shift, &path),
    )
}

fn single_config(spec: &ExperimentSpec) -> Result<SearchConfig> {
    network_config(&build_template(spec, spec.rho[0])?, spec.n[0], spec.seed)
}

/// Files produced by an experiment, plus bookkeeping for the manifest.
struct Outcome {
    files: Vec<(String, String)>,
    expected_runs: usize,
    run_rows: usize,
    origin: OriginCheck,
}

fn with_runs(records: &[RunRecord], expected_runs: usize, origin: OriginCheck) -> Outcome {
    Outcome {
        files: vec![("runs.csv".into(), runs_csv(records))],
        expected_runs,
        run_rows: records.len(),
        origin,
    }
}

fn compute(spec: &ExperimentSpec, fp: &str) -> Result<Outcome> {
    match spec.kind {
        ExperimentKind::Run | ExperimentKind::Converge => {
            let cfg = single_config(spec)?;
            let (runs, keep) = if spec.kind == ExperimentKind::Run {
                (1, true)
            } else {
                (spec.runs, spec.traces)
            };
            let mc = monte_carlo_convergence(&cfg, runs, spec.seed, keep)?;
            let mut out = with_runs(&mc.runs, runs, mc.origin_check);
            out.files.push((
                "summary.csv".into(),
                summary_csv(&[SummaryRow::from_condition(spec.kind.as_str(), &mc.summary())]),
            ));
            out.files.push((
                "curve.csv".into(),
                curve_csv(&mc.convergence_fraction_by_iter, &mc.mean_value_by_iter),
            ));
            for r in &mc.runs {
                if let Some(t) = &r.trace {
                    let mut buf = Vec::new();
                    t.write_csv(&mut buf, fp, r.seed)?;
                    out.files.push((
                        format!("trace_{}.csv", r.run_id),
                        String::from_utf8(buf).expect("csv is ascii"),
                    ));
                }
            }
            Ok(out)
        }
        ExperimentKind::Scaling => {
            let template = build_template(spec, spec.rho[0])?;
            let res = scaling_study(&template, &spec.n, spec.runs, spec.channels, spec.seed)?;
            let origin = network_config(&template, spec.n[0], spec.seed)?;
            let mut rows: Vec<SummaryRow> = res
                .conditions
                .iter()
                .map(|c| SummaryRow::from_condition(format!("N={}", c.n), c))
                .collect();
            rows.push(SummaryRow {
                condition: "fit".into(),
                rho: Some(spec.rho[0]),
                fit: Some(res.fit),
                ..Default::default()
            });
            let expected = spec.n.len() * spec.runs * spec.channels;
            let mut out = with_runs(
                &res.runs,
                expected,
                check_origin_interior(&origin.perturbation, 1),
            );
            out.files.push(("summary.csv".into(), summary_csv(&rows)));
            Ok(out)
        }
        ExperimentKind::AsyncSweep => {
            let template = build_template(spec, 100.0)?;
            let res = async_sweep(&template, spec.n[0], &spec.rho, spec.runs, spec.seed)?;
            let rows: Vec<SummaryRow> = res
                .conditions
                .iter()
                .map(|c| SummaryRow::from_condition(format!("rho={}", c.rho), c))
                .collect();
            let origin = single_config(spec)?;
            let mut out = with_runs(
                &res.runs,
                spec.rho.len() * spec.runs,
                check_origin_interior(&origin.perturbation, 1),
            );
            out.files.push(("summary.csv".into(), summary_csv(&rows)));
            Ok(out)
        }
        ExperimentKind::ImproveProb => improve_prob(spec),
    }
}

fn improve_prob(spec: &ExperimentSpec) -> Result<Outcome> {
    let cfg = single_config(spec)?;
    let n = cfg.dimension();
    let global_max = cfg.global_max();
    let rho = cfg.schedule.rho();
    let mut records = Vec::with_capacity(spec.runs);
    let mut rows = Vec::with_capacity(spec.runs + 1);
    let mut estimates = Vec::with_capacity(spec.runs);
    for k in 0..spec.runs {
        let seed = derive_seed(spec.seed, Stream::State, &[k as u64]);
        let mut rng = rng_from_seed(seed);
        let mut state = None;
        for _ in 0..MAX_STATE_DRAWS {
            let theta: Vec<f64> = (0..n)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let v = cfg.objective.evaluate(&theta);
            if !cfg.stop.is_met(v, global_max) {
                state = Some((PhaseState::new(theta)?, v));
                break;
            }
        }
        let (theta, value) = state.ok_or_else(|| Error::NoConvergedRuns {
            cell: format!("improve-prob state {k}: no draw outside the convergence region"),
            runs: MAX_STATE_DRAWS,
        })?;
        let est = improvement_probability_estimate(&theta, &cfg, spec.samples, &mut rng)?;
        estimates.push(est);
        records.push(RunRecord {
            run_id: k,
            seed,
            n,
            rho,
            channel: 0,
            hit_index: None,
            final_value: value,
            trace: None,
        });
        rows.push(SummaryRow {
            condition: format!("state={k}"),
            n: Some(n),
            rho: Some(rho),
            improvement_probability: Some(est),
            ..Default::default()
        });
    }
    let stats = SampleStats::from_values(estimates.iter().copied());
    rows.push(SummaryRow {
        condition: "all".into(),
        n: Some(n),
        rho: Some(rho),
        runs: Some(spec.runs),
        improvement_probability: stats.map(|s| s.mean),
        std: stats.map(|s| s.std_dev),
        stderr: stats.map(|s| s.std_error),
        ..Default::default()
    });
    let mut out = with_runs(
        &records,
        spec.runs,
        check_origin_interior(&cfg.perturbation, 1),
    );
    out.files.push(("summary.csv".into(), summary_csv(&rows)));
    Ok(out)
}

const KNOWN_OUTPUTS: [&str; 4] = ["runs.csv", "summary.csv", "curve.csv", "manifest.txt"];

fn is_known_output(name: &str) -> bool {
    KNOWN_OUTPUTS.contains(&name) || (name.starts_with("trace_") && name.ends_with(".csv"))
}

fn prepare_out_dir(dir: &Path, overwrite: bool) -> Result<()> {
    if dir.exists() {
        let non_empty = fs::read_dir(dir)?.next().is_some();
        if non_empty && !overwrite {
            return Err(Error::OutputExists(dir.to_path_buf()));
        }
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            if entry.file_name().to_str().is_some_and(is_known_output) {
                fs::remove_file(entry.path())?;
            }
        }
    } else {
        fs::create_dir_all(dir)?;
    }
    Ok(())
}

fn manifest_text(
    spec: &ExperimentSpec,
    fp: &str,
    workers: usize,
    wall: f64,
    result: &std::result::Result<&Outcome, &Error>,
) -> String {
    let mut m = vec![
        "# beamsearch manifest".to_string(),
        format!("# version = {}", env!("CARGO_PKG_VERSION")),
        format!("# fingerprint = {fp}"),
        format!("# workers = {workers}"),
        format!("# wall_time_s = {wall:.3}"),
    ];
    match result {
        Ok(o) => {
            m.push("# status = ok".into());
            m.push(format!("# runs_csv_rows = {}", o.run_rows));
            m.push(format!("# expected_runs = {}", o.expected_runs));
            if o.run_rows != o.expected_runs {
                m.push(format!(
                    "# discrepancy = {} rows missing from runs.csv",
                    o.expected_runs.saturating_sub(o.run_rows)
                ));
            }
            m.push(format!("# origin_check = {:?}", o.origin));
            if o.origin != OriginCheck::Interior {
                m.push(
                    "# warning = origin is not interior to the perturbation support; convergence is not guaranteed"
                        .into(),
                );
            }
        }
        Err(e) => {
            m.push("# status = failed".into());
            m.push(format!("# failure = {e}"));
        }
    }
    m.push("# regenerate with: beamsearch <experiment> --config manifest.txt --out <dir>".into());
    let mut text = m.join("\n");
    text.push('\n');
    text.push_str(&spec.to_config_text());
    text
}

/// Runs the experiment in `spec` and writes `runs.csv`, `summary.csv`,
/// `manifest.txt` and, where applicable, `curve.csv` and `trace_<id>.csv`.
///
/// On failure only the manifest is written, recording the error.
pub fn execute(spec: &ExperimentSpec, opts: &ExecuteOptions) -> Result<ExecutionReport> {
    spec.validate()?;
    let workers = match opts.workers {
        Some(0) => return Err(Error::invalid("workers", 0, "integer >= 1")),
        Some(w) => w,
        None => worker_count()?,
    };
    let fp = fingerprint(&spec.identity_text());
    let out_dir = spec
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results").join(format!("{}-{fp}", spec.kind)));
    prepare_out_dir(&out_dir, opts.overwrite)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid("workers", workers, e.to_string()))?;
    let start = Instant::now();
    let result = pool.install(|| compute(spec, &fp));
    let wall = start.elapsed().as_secs_f64();

    let manifest_path = out_dir.join("manifest.txt");
    match result {
        Ok(outcome) => {
            let mut files = Vec::with_capacity(outcome.files.len() + 1);
            for (name, body) in &outcome.files {
                let p = out_dir.join(name);
                fs::write(&p, body)?;
                files.push(p);
            }
            fs::write(
                &manifest_path,
                manifest_text(spec, &fp, workers, wall, &Ok(&outcome)),
            )?;
            files.push(manifest_path);
            Ok(ExecutionReport {
                out_dir,
                fingerprint: fp,
                files,
                workers,
            })
        }
        Err(e) => {
            fs::write(
                &manifest_path,
                manifest_text(spec, &fp, workers, wall, &Err(&e)),
            )?;
            Err(e)
        }
    }
}
