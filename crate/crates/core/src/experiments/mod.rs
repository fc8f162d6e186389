//! Seeded Monte Carlo studies on top of the search engine.
//!
//! All studies take a master seed and derive every per-run, per-channel and
//! per-shift seed from it with [`derive_seed`](crate::rng::derive_seed).
//! Runs execute on the current rayon pool and are gathered in job order, so
//! results depend only on the inputs and never on the number of workers.

mod fit;
mod improve;
mod monte_carlo;
mod scaling;
mod stats;
mod template;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub use fit::{linear_fit, LinearFit};
pub use improve::improvement_probability_estimate;
pub use monte_carlo::{monte_carlo_convergence, MonteCarloResult};
pub use scaling::{async_sweep, scaling_study, AsyncSweepResult, ScalingResult};
pub use stats::{paired_difference, SampleStats};
pub use template::{
    Budget, MeasureSpec, ObjectiveFactory, ObjectiveSpec, PerturbationFactory, SearchTemplate,
    ShiftRule,
};

use crate::error::{Error, Result};
use crate::search::{run_seeded, SearchConfig, Trace};

/// Short stable hash (16 hex digits of SHA-256) of a canonical description.
pub fn fingerprint(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

/// Outcome of one run inside an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: usize,
    pub seed: u64,
    pub n: usize,
    pub rho: f64,
    /// Channel realization index within its (N, ρ) cell.
    pub channel: usize,
    pub hit_index: Option<usize>,
    pub final_value: f64,
    pub trace: Option<Trace>,
}

/// Hitting-time summary for one experimental condition. Only converged runs
/// enter `stats`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSummary {
    pub n: usize,
    pub rho: f64,
    pub runs: usize,
    pub converged: usize,
    pub stats: Option<SampleStats>,
}

impl ConditionSummary {
    pub fn from_records<'a>(n: usize, rho: f64, records: impl IntoIterator<Item = &'a RunRecord>) -> Self {
        let hits: Vec<Option<usize>> = records.into_iter().map(|r| r.hit_index).collect();
        let stats = SampleStats::from_values(hits.iter().flatten().map(|&h| h as f64));
        Self {
            n,
            rho,
            runs: hits.len(),
            converged: hits.iter().flatten().count(),
            stats,
        }
    }

    pub fn non_converged(&self) -> usize {
        self.runs - self.converged
    }

    pub fn convergence_fraction(&self) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.converged as f64 / self.runs as f64
        }
    }

    pub fn mean(&self) -> Option<f64> {
        self.stats.map(|s| s.mean)
    }
}

struct Job<'a> {
    config: &'a SearchConfig,
    seed: u64,
}

/// Runs every job in parallel and returns the traces in job order. The
/// reported error, if any, is the one from the lowest-numbered failing job.
fn run_jobs(jobs: &[Job<'_>]) -> Result<Vec<Trace>> {
    let results: Vec<Result<Trace>> = jobs
        .par_iter()
        .map(|j| run_seeded(j.config, j.seed))
        .collect();
    results.into_iter().collect()
}

fn require_positive(key: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::invalid(key, 0, format!("{key} >= 1")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_is_stable_and_short() {
        let a = fingerprint("abc");
        assert_eq!(a.len(), 16);
        // SHA-256("abc") starts with ba7816bf8f01cfea.
        assert_eq!(a, "ba7816bf8f01cfea");
        assert_ne!(a, fingerprint("abd"));
    }
}
