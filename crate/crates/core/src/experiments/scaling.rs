use super::{
    fingerprint, linear_fit, require_positive, run_jobs, ConditionSummary, Job, LinearFit,
    RunRecord, SearchTemplate,
};
use crate::error::{Error, Result};
use crate::model::UpdateSchedule;
use crate::rng::{derive_seed, Stream};
use crate::search::SearchConfig;

/// Mean hitting time as a function of the number of transmitters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingResult {
    pub config_fingerprint: String,
    pub n_values: Vec<usize>,
    /// Mean over converged runs of all channel draws, one per entry of
    /// `n_values`.
    pub mean_hit_times: Vec<f64>,
    pub fit: LinearFit,
    pub conditions: Vec<ConditionSummary>,
    pub runs: Vec<RunRecord>,
}

/// Hitting times at several update percentages under common random numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct AsyncSweepResult {
    pub config_fingerprint: String,
    pub n: usize,
    pub rho_values: Vec<f64>,
    pub conditions: Vec<ConditionSummary>,
    /// `hit_times[k][r]`: run `r` at `rho_values[k]`. Run `r` shares its
    /// channel, shift, start and perturbation draws across all ρ.
    pub hit_times: Vec<Vec<Option<usize>>>,
    pub runs: Vec<RunRecord>,
}

impl AsyncSweepResult {
    /// `(ρ, mean hitting time)` pairs.
    pub fn mean_by_rho(&self) -> Vec<(f64, f64)> {
        self.conditions
            .iter()
            .map(|c| (c.rho, c.mean().unwrap_or(f64::NAN)))
            .collect()
    }
}

fn check_n_values(n_values: &[usize]) -> Result<()> {
    if n_values.len() < 2 {
        return Err(Error::UnderdeterminedFit {
            distinct: n_values.len(),
        });
    }
    for w in n_values.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::invalid(
                "n_values",
                format!("{:?}", n_values),
                "strictly increasing values",
            ));
        }
    }
    if n_values[0] < 2 {
        return Err(Error::invalid("n_values", n_values[0], "every N >= 2"));
    }
    Ok(())
}

/// For every N, draws `channels_per_n` networks, runs `runs_per_n` searches on
/// each, averages the finite hitting times and fits a line through
/// `(N, mean)`.
///
/// Fails if any (N, channel) cell has no converged run.
pub fn scaling_study(
    template: &SearchTemplate,
    n_values: &[usize],
    runs_per_n: usize,
    channels_per_n: usize,
    master_seed: u64,
) -> Result<ScalingResult> {
    check_n_values(n_values)?;
    require_positive("runs_per_n", runs_per_n)?;
    require_positive("channels_per_n", channels_per_n)?;

    let mut configs: Vec<(usize, usize, SearchConfig)> = Vec::new();
    for &n in n_values {
        for c in 0..channels_per_n {
            let path = [n as u64, c as u64];
            let cfg = template.instantiate(
                n,
                derive_seed(master_seed, Stream::Channel, &path),
                derive_seed(master_seed, Stream::Shift, &path),
            )?;
            configs.push((n, c, cfg));
        }
    }
    let mut jobs = Vec::new();
    for (n, c, cfg) in &configs {
        for r in 0..runs_per_n {
            jobs.push(Job {
                config: cfg,
                seed: derive_seed(master_seed, Stream::Run, &[*n as u64, *c as u64, r as u64]),
            });
        }
    }
    let traces = run_jobs(&jobs)?;

    let rho = template.schedule.rho();
    let mut records = Vec::with_capacity(traces.len());
    for (i, (job, trace)) in jobs.iter().zip(traces).enumerate() {
        let (n, c, _) = &configs[i / runs_per_n];
        records.push(RunRecord {
            run_id: i,
            seed: job.seed,
            n: *n,
            rho,
            channel: *c,
            hit_index: trace.hit_index,
            final_value: trace.final_value(),
            trace: None,
        });
    }

    for cell in records.chunks(runs_per_n) {
        if cell.iter().all(|r| r.hit_index.is_none()) {
            return Err(Error::NoConvergedRuns {
                cell: format!("N={}, rho={rho}, channel={}", cell[0].n, cell[0].channel),
                runs: runs_per_n,
            });
        }
    }

    let per_n = runs_per_n * channels_per_n;
    let conditions: Vec<ConditionSummary> = records
        .chunks(per_n)
        .zip(n_values)
        .map(|(rs, &n)| ConditionSummary::from_records(n, rho, rs))
        .collect();
    let mean_hit_times: Vec<f64> = conditions
        .iter()
        .map(|c| c.mean().expect("every cell has a converged run"))
        .collect();
    let points: Vec<(f64, f64)> = n_values
        .iter()
        .zip(&mean_hit_times)
        .map(|(&n, &m)| (n as f64, m))
        .collect();
    let fit = linear_fit(&points)?;

    Ok(ScalingResult {
        config_fingerprint: fingerprint(&format!(
            "scaling;{};n={n_values:?};runs={runs_per_n};channels={channels_per_n};seed={master_seed}",
            template.describe()
        )),
        n_values: n_values.to_vec(),
        mean_hit_times,
        fit,
        conditions,
        runs: records,
    })
}

/// Runs the template at `n` transmitters for each update percentage in
/// `rho_values`.
///
/// Run `r` draws its network (channel and shift) and its search seed from
/// indices that do not involve ρ, so conditions are paired run by run.
pub fn async_sweep(
    template: &SearchTemplate,
    n: usize,
    rho_values: &[f64],
    runs_per_rho: usize,
    master_seed: u64,
) -> Result<AsyncSweepResult> {
    require_positive("runs_per_rho", runs_per_rho)?;
    if rho_values.is_empty() {
        return Err(Error::invalid("rho", "[]", "at least one value in (0, 100]"));
    }
    let schedules = rho_values
        .iter()
        .map(|&rho| UpdateSchedule::from_rho(rho))
        .collect::<Result<Vec<_>>>()?;

    let mut configs = Vec::with_capacity(schedules.len() * runs_per_rho);
    for schedule in &schedules {
        let t = template.clone().with_schedule(*schedule);
        for r in 0..runs_per_rho {
            let path = [n as u64, r as u64];
            configs.push(t.instantiate(
                n,
                derive_seed(master_seed, Stream::Channel, &path),
                derive_seed(master_seed, Stream::Shift, &path),
            )?);
        }
    }
    let jobs: Vec<Job> = configs
        .iter()
        .enumerate()
        .map(|(i, cfg)| Job {
            config: cfg,
            seed: derive_seed(
                master_seed,
                Stream::Run,
                &[n as u64, (i % runs_per_rho) as u64],
            ),
        })
        .collect();
    let traces = run_jobs(&jobs)?;

    let records: Vec<RunRecord> = jobs
        .iter()
        .zip(traces)
        .enumerate()
        .map(|(i, (job, trace))| RunRecord {
            run_id: i,
            seed: job.seed,
            n,
            rho: rho_values[i / runs_per_rho],
            channel: i % runs_per_rho,
            hit_index: trace.hit_index,
            final_value: trace.final_value(),
            trace: None,
        })
        .collect();

    let mut conditions = Vec::with_capacity(rho_values.len());
    let mut hit_times = Vec::with_capacity(rho_values.len());
    for (rs, &rho) in records.chunks(runs_per_rho).zip(rho_values) {
        let c = ConditionSummary::from_records(n, rho, rs);
        if c.converged == 0 {
            return Err(Error::NoConvergedRuns {
                cell: format!("N={n}, rho={rho}"),
                runs: runs_per_rho,
            });
        }
        conditions.push(c);
        hit_times.push(rs.iter().map(|r| r.hit_index).collect());
    }

    Ok(AsyncSweepResult {
        config_fingerprint: fingerprint(&format!(
            "async;{};n={n};rho={rho_values:?};runs={runs_per_rho};seed={master_seed}",
            template.describe()
        )),
        n,
        rho_values: rho_values.to_vec(),
        conditions,
        hit_times,
        runs: records,
    })
}
