use super::{fingerprint, require_positive, run_jobs, ConditionSummary, Job, RunRecord};
use crate::error::Result;
use crate::model::{check_origin_interior, OriginCheck};
use crate::rng::{derive_seed, Stream};
use crate::search::SearchConfig;

/// Independent runs of one config from different random starting points.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub config_fingerprint: String,
    pub runs: Vec<RunRecord>,
    /// Fraction of runs whose hit index is `<= n`, for `n = 0..=budget`.
    pub convergence_fraction_by_iter: Vec<f64>,
    /// Mean of `f(θ[n])` over runs; a run that stopped early contributes its
    /// last value.
    pub mean_value_by_iter: Vec<f64>,
    /// Whether the perturbation support straddles the origin. Runs are
    /// permitted either way, but only `Interior` carries a guarantee.
    pub origin_check: OriginCheck,
}

impl MonteCarloResult {
    pub fn hit_times(&self) -> Vec<Option<usize>> {
        self.runs.iter().map(|r| r.hit_index).collect()
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.runs.iter().map(|r| r.seed).collect()
    }

    pub fn final_convergence_fraction(&self) -> f64 {
        self.convergence_fraction_by_iter.last().copied().unwrap_or(0.0)
    }

    pub fn summary(&self) -> ConditionSummary {
        let first = &self.runs[0];
        ConditionSummary::from_records(first.n, first.rho, &self.runs)
    }
}

/// Runs `runs` independent searches of `config`, seeded from `master_seed`.
///
/// Run `r` uses seed `derive_seed(master_seed, Run, [r])`. Traces are kept in
/// the result only when `keep_traces` is set.
pub fn monte_carlo_convergence(
    config: &SearchConfig,
    runs: usize,
    master_seed: u64,
    keep_traces: bool,
) -> Result<MonteCarloResult> {
    require_positive("runs", runs)?;
    config.validate()?;
    let jobs: Vec<Job> = (0..runs)
        .map(|r| Job {
            config,
            seed: derive_seed(master_seed, Stream::Run, &[r as u64]),
        })
        .collect();
    let traces = run_jobs(&jobs)?;

    let len = config.max_iterations + 1;
    let mut hits_at = vec![0usize; len];
    let mut value_sum = vec![0.0; len];
    for t in &traces {
        if let Some(h) = t.hit_index {
            hits_at[h] += 1;
        }
        let last = t.final_value();
        for (n, s) in value_sum.iter_mut().enumerate() {
            *s += t.values.get(n).copied().unwrap_or(last);
        }
    }
    let mut cum = 0usize;
    let convergence_fraction_by_iter = hits_at
        .iter()
        .map(|&h| {
            cum += h;
            cum as f64 / runs as f64
        })
        .collect();
    let mean_value_by_iter = value_sum.iter().map(|s| s / runs as f64).collect();

    let rho = config.schedule.rho();
    let n = config.dimension();
    let records = jobs
        .iter()
        .zip(traces)
        .enumerate()
        .map(|(run_id, (job, trace))| RunRecord {
            run_id,
            seed: job.seed,
            n,
            rho,
            channel: 0,
            hit_index: trace.hit_index,
            final_value: trace.final_value(),
            trace: keep_traces.then_some(trace),
        })
        .collect();

    Ok(MonteCarloResult {
        config_fingerprint: fingerprint(&format!(
            "{};runs={runs};seed={master_seed}",
            config.describe()
        )),
        runs: records,
        convergence_fraction_by_iter,
        mean_value_by_iter,
        origin_check: check_origin_interior(&config.perturbation, 1),
    })
}
