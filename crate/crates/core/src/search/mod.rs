//! The perturb / accept-if-improved local random search.
//!
//! Each iteration draws `δ ~ μ_n`, transforms it with `G_n`, zeroes the
//! coordinates of idle transmitters and evaluates the objective once at the
//! candidate. The candidate replaces the current point only if it is strictly
//! better, so only the sign of the difference is ever used.

mod config;
mod trace;

use rand::RngCore;

pub use config::{default_budget, InitialState, SearchConfig, StopCriterion};
pub use trace::Trace;

use crate::error::{Error, Result};
use crate::model::{Objective, PhaseState};
use crate::rng::{rng_from_seed, SimRng};

/// Result of a single update.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: PhaseState,
    pub value: f64,
    pub accepted: bool,
}

/// Applies one update `D(θ, δ)` with an already transformed and masked
/// perturbation. `current_value` is the cached `f(θ)`; only the candidate is
/// evaluated.
pub fn step(
    theta: &PhaseState,
    current_value: f64,
    perturbation: &[f64],
    objective: &dyn Objective,
) -> Result<StepOutcome> {
    if perturbation.len() != theta.dimension() {
        return Err(Error::DimensionMismatch {
            expected: theta.dimension(),
            found: perturbation.len(),
        });
    }
    if objective.dimension() != theta.dimension() {
        return Err(Error::DimensionMismatch {
            expected: objective.dimension(),
            found: theta.dimension(),
        });
    }
    let candidate: Vec<f64> = theta
        .as_slice()
        .iter()
        .zip(perturbation)
        .map(|(t, d)| t + d)
        .collect();
    let value = objective.evaluate(&candidate);
    if !value.is_finite() {
        return Err(Error::non_finite("objective value at candidate"));
    }
    if value > current_value {
        Ok(StepOutcome {
            state: PhaseState::from_vec_unchecked(candidate),
            value,
            accepted: true,
        })
    } else {
        Ok(StepOutcome {
            state: theta.clone(),
            value: current_value,
            accepted: false,
        })
    }
}

/// Independent random streams used by one run, so that changing one part of
/// a config (e.g. the schedule) leaves the other draws untouched.
struct RunStreams {
    initial: SimRng,
    perturbation: SimRng,
    mask: SimRng,
}

impl RunStreams {
    fn from_rng(rng: &mut SimRng) -> Self {
        let initial = rng_from_seed(rng.next_u64());
        let perturbation = rng_from_seed(rng.next_u64());
        let mask = rng_from_seed(rng.next_u64());
        Self {
            initial,
            perturbation,
            mask,
        }
    }
}

/// Runs the search described by `config`.
///
/// Three seeds are taken from `rng` for the initial point, the perturbation
/// draws and the update masks.
pub fn run(config: &SearchConfig, rng: &mut SimRng) -> Result<Trace> {
    config.validate()?;
    let mut streams = RunStreams::from_rng(rng);
    let n = config.dimension();
    let objective = config.objective.as_ref();
    let global_max = config.global_max();

    let mut theta = config
        .initial
        .materialize(n, &mut streams.initial)?
        .into_inner();
    let mut value = objective.evaluate(&theta);
    if !value.is_finite() {
        return Err(Error::non_finite("objective value at initial point"));
    }

    let mut values = vec![value];
    let mut accepted = vec![false];
    let mut hit_index = config.stop.is_met(value, global_max).then_some(0);

    if !(hit_index.is_some() && config.halt_on_hit) {
        let mut delta = vec![0.0; n];
        let mut mask = vec![true; n];
        let mut candidate = vec![0.0; n];
        for it in 1..=config.max_iterations {
            config
                .perturbation
                .sample_into(it as u64, &mut streams.perturbation, &mut delta);
            config.schedule.fill_mask(&mut streams.mask, &mut mask);
            for i in 0..n {
                candidate[i] = if mask[i] { theta[i] + delta[i] } else { theta[i] };
            }
            let cv = objective.evaluate(&candidate);
            if !cv.is_finite() {
                return Err(Error::non_finite(format!(
                    "objective value at iteration {it}"
                )));
            }
            let keep = cv > value;
            if keep {
                std::mem::swap(&mut theta, &mut candidate);
                value = cv;
            }
            values.push(value);
            accepted.push(keep);
            if hit_index.is_none() && config.stop.is_met(value, global_max) {
                hit_index = Some(it);
                if config.halt_on_hit {
                    break;
                }
            }
        }
    }

    Ok(Trace {
        values,
        accepted,
        final_state: PhaseState::new(theta)?,
        hit_index,
        stop: config.stop,
        global_max,
    })
}

/// [`run`] with a fresh generator seeded from `seed`.
pub fn run_seeded(config: &SearchConfig, seed: u64) -> Result<Trace> {
    run(config, &mut rng_from_seed(seed))
}

/// `f(θ) > f(θ*) − ε`.
pub fn in_epsilon_region(theta: &PhaseState, objective: &dyn Objective, epsilon: f64) -> Result<bool> {
    let g = objective.global_max_value().ok_or(Error::MissingGlobalMax {
        needed: "the epsilon-region test",
    })?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid("epsilon", epsilon, "finite epsilon > 0"));
    }
    if theta.dimension() != objective.dimension() {
        return Err(Error::DimensionMismatch {
            expected: objective.dimension(),
            found: theta.dimension(),
        });
    }
    Ok(objective.evaluate(theta.as_slice()) > g - epsilon)
}

/// First index at which `values` meets `stop`.
pub fn first_hit(values: &[f64], stop: &StopCriterion, global_max: Option<f64>) -> Option<usize> {
    values.iter().position(|&v| stop.is_met(v, global_max))
}

/// Hitting time of a trace: the first iteration meeting its stop criterion.
pub fn hitting_time(trace: &Trace) -> Option<usize> {
    first_hit(&trace.values, &trace.stop, trace.global_max)
}
