use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Objective, PerturbationModel, PhaseState, UpdateSchedule};
use crate::rng::SimRng;

/// When a run counts as converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCriterion {
    /// `f(θ) ≥ α f(θ*)`, `α ∈ (0, 1]`.
    AlphaThreshold { alpha: f64 },
    /// `f(θ) > f(θ*) − ε`, membership in the ε-convergence region.
    EpsilonRegion { epsilon: f64 },
    /// Never met; runs use their whole budget.
    BudgetOnly,
}

impl StopCriterion {
    pub fn alpha(alpha: f64) -> Result<Self> {
        let c = StopCriterion::AlphaThreshold { alpha };
        c.validate_params()?;
        Ok(c)
    }

    pub fn epsilon(epsilon: f64) -> Result<Self> {
        let c = StopCriterion::EpsilonRegion { epsilon };
        c.validate_params()?;
        Ok(c)
    }

    fn validate_params(&self) -> Result<()> {
        match *self {
            StopCriterion::AlphaThreshold { alpha } if !(alpha > 0.0 && alpha <= 1.0) => {
                Err(Error::invalid("alpha", alpha, "0 < alpha <= 1"))
            }
            StopCriterion::EpsilonRegion { epsilon }
                if !(epsilon.is_finite() && epsilon > 0.0) =>
            {
                Err(Error::invalid("epsilon", epsilon, "finite epsilon > 0"))
            }
            _ => Ok(()),
        }
    }

    /// Checks the parameters and that a global maximum is available when the
    /// criterion needs one.
    pub fn validate(&self, global_max: Option<f64>) -> Result<()> {
        self.validate_params()?;
        if self.needs_global_max() && global_max.is_none() {
            return Err(Error::MissingGlobalMax {
                needed: "a threshold stop criterion",
            });
        }
        Ok(())
    }

    pub fn needs_global_max(&self) -> bool {
        !matches!(self, StopCriterion::BudgetOnly)
    }

    /// Whether `value` satisfies the criterion. Always false without a
    /// global maximum.
    pub fn is_met(&self, value: f64, global_max: Option<f64>) -> bool {
        match (*self, global_max) {
            (StopCriterion::AlphaThreshold { alpha }, Some(g)) => value >= alpha * g,
            (StopCriterion::EpsilonRegion { epsilon }, Some(g)) => value > g - epsilon,
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            StopCriterion::AlphaThreshold { alpha } => format!("alpha={alpha}"),
            StopCriterion::EpsilonRegion { epsilon } => format!("epsilon={epsilon}"),
            StopCriterion::BudgetOnly => "budget".into(),
        }
    }
}

/// How `θ[0]` is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Zeros,
    /// Independent uniform phases on `[-π, π)`.
    UniformRandom,
    Given(PhaseState),
}

impl InitialState {
    pub fn materialize(&self, n: usize, rng: &mut SimRng) -> Result<PhaseState> {
        match self {
            InitialState::Zeros => PhaseState::zeros(n),
            InitialState::UniformRandom => {
                PhaseState::new((0..n).map(|_| rng.random_range(-PI..PI)).collect())
            }
            InitialState::Given(s) => {
                if s.dimension() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: s.dimension(),
                    });
                }
                Ok(s.clone())
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            InitialState::Zeros => "zeros".into(),
            InitialState::UniformRandom => "uniform".into(),
            InitialState::Given(s) => format!(
                "given({})",
                s.as_slice()
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(";")
            ),
        }
    }
}

/// Default iteration budget: `200 N` slots, stretched by `1/p` when only a
/// fraction `p` of the transmitters update per slot.
pub fn default_budget(n: usize, schedule: &UpdateSchedule) -> usize {
    ((200 * n) as f64 / schedule.update_probability()).ceil() as usize
}

/// Everything a single search run needs.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub objective: Arc<dyn Objective>,
    pub perturbation: PerturbationModel,
    pub schedule: UpdateSchedule,
    pub initial: InitialState,
    pub max_iterations: usize,
    pub stop: StopCriterion,
    /// Stop iterating at the first iteration that meets `stop`.
    pub halt_on_hit: bool,
}

impl SearchConfig {
    /// Synchronous schedule, uniform-random start, default budget, halting at
    /// `α = 0.9` when the objective's maximum is known.
    pub fn new(objective: Arc<dyn Objective>, perturbation: PerturbationModel) -> Self {
        let n = objective.dimension();
        let stop = if objective.global_max_value().is_some() {
            StopCriterion::AlphaThreshold { alpha: 0.9 }
        } else {
            StopCriterion::BudgetOnly
        };
        let schedule = UpdateSchedule::Synchronous;
        Self {
            objective,
            perturbation,
            schedule,
            initial: InitialState::UniformRandom,
            max_iterations: default_budget(n, &schedule),
            stop,
            halt_on_hit: true,
        }
    }

    /// Sets the schedule and rescales the budget to the new default.
    pub fn with_schedule(mut self, schedule: UpdateSchedule) -> Self {
        self.schedule = schedule;
        self.max_iterations = default_budget(self.dimension(), &schedule);
        self
    }

    pub fn with_initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_stop(mut self, stop: StopCriterion) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_halt_on_hit(mut self, halt: bool) -> Self {
        self.halt_on_hit = halt;
        self
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    pub fn global_max(&self) -> Option<f64> {
        self.objective.global_max_value()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dimension();
        if n == 0 {
            return Err(Error::invalid("n", 0, "n >= 1"));
        }
        if self.perturbation.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.perturbation.dimension(),
            });
        }
        if let InitialState::Given(s) = &self.initial {
            if s.dimension() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.dimension(),
                });
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", 0, "max_iterations >= 1"));
        }
        self.schedule.validate()?;
        self.stop.validate(self.global_max())
    }

    pub fn describe(&self) -> String {
        format!(
            "objective={};perturbation={};rho={};init={};budget={};stop={};halt={}",
            self.objective.describe(),
            self.perturbation.describe(),
            self.schedule.rho(),
            self.initial.describe(),
            self.max_iterations,
            self.stop.describe(),
            self.halt_on_hit
        )
    }
}
