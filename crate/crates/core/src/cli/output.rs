use std::fmt::Write as _;

use crate::experiments::{ConditionSummary, LinearFit, RunRecord};

pub(crate) const RUNS_HEADER: &str = "run_id,seed,N,rho,hit_index,final_f";
pub(crate) const SUMMARY_HEADER: &str = "condition,N,rho,runs,converged,non_converged,convergence_fraction,mean_hit,std_hit,stderr_hit,improvement_probability,slope,intercept,r_squared";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub(crate) fn runs_csv(records: &[RunRecord]) -> String {
    let mut s = String::from(RUNS_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.run_id,
            r.seed,
            r.n,
            r.rho,
            opt(r.hit_index),
            r.final_value
        );
    }
    s
}

/// One row of `summary.csv`.
#[derive(Debug, Clone, Default)]
pub(crate) struct SummaryRow {
    pub condition: String,
    pub n: Option<usize>,
    pub rho: Option<f64>,
    pub runs: Option<usize>,
    pub converged: Option<usize>,
    pub convergence_fraction: Option<f64>,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub stderr: Option<f64>,
    pub improvement_probability: Option<f64>,
    pub fit: Option<LinearFit>,
}

impl SummaryRow {
    pub fn from_condition(label: impl Into<String>, c: &ConditionSummary) -> Self {
        Self {
            condition: label.into(),
            n: Some(c.n),
            rho: Some(c.rho),
            runs: Some(c.runs),
            converged: Some(c.converged),
            convergence_fraction: Some(c.convergence_fraction()),
            mean: c.stats.map(|s| s.mean),
            std: c.stats.map(|s| s.std_dev),
            stderr: c.stats.map(|s| s.std_error),
            ..Default::default()
        }
    }
}

pub(crate) fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in rows {
        let non_converged = r.runs.zip(r.converged).map(|(a, b)| a - b);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.condition,
            opt(r.n),
            opt(r.rho),
            opt(r.runs),
            opt(r.converged),
            opt(non_converged),
            opt(r.convergence_fraction),
            opt(r.mean),
            opt(r.std),
            opt(r.stderr),
            opt(r.improvement_probability),
            opt(r.fit.map(|f| f.slope)),
            opt(r.fit.map(|f| f.intercept)),
            opt(r.fit.map(|f| f.r_squared)),
        );
    }
    s
}

pub(crate) fn curve_csv(fraction: &[f64], mean_value: &[f64]) -> String {
    let mut s = String::from("iter,convergence_fraction,mean_f\n");
    for (i, (f, m)) in fraction.iter().zip(mean_value).enumerate() {
        let _ = writeln!(s, "{i},{f},{m}");
    }
    s
}
