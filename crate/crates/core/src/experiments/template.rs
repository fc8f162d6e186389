use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{
    sample_channels, ModPiQuadraticObjective, Objective, PerturbationModel, SnrObjective,
    UpdateSchedule,
};
use crate::rng::{rng_from_seed, SimRng};
use crate::search::{default_budget, InitialState, SearchConfig, StopCriterion};

/// Builds an objective of a given dimension. `rng` is the channel stream.
pub trait ObjectiveFactory: Debug + Send + Sync {
    fn build(&self, n: usize, rng: &mut SimRng) -> Result<Arc<dyn Objective>>;
    fn describe(&self) -> String;
}

/// Builds a perturbation model of a given dimension. `rng` is the shift
/// stream.
pub trait PerturbationFactory: Debug + Send + Sync {
    fn build(&self, n: usize, rng: &mut SimRng) -> Result<PerturbationModel>;
    fn describe(&self) -> String;
}

#[derive(Debug, Clone)]
pub enum ObjectiveSpec {
    /// SNR with fresh CN(0,1) channels per instantiation.
    Snr { signal_power: f64, noise_power: f64 },
    ModPiQuadratic,
    Custom(Arc<dyn ObjectiveFactory>),
}

impl ObjectiveSpec {
    pub fn snr() -> Self {
        ObjectiveSpec::Snr {
            signal_power: 1.0,
            noise_power: 1.0,
        }
    }

    fn build(&self, n: usize, rng: &mut SimRng) -> Result<Arc<dyn Objective>> {
        Ok(match self {
            ObjectiveSpec::Snr {
                signal_power,
                noise_power,
            } => Arc::new(SnrObjective::new(
                sample_channels(n, rng)?,
                *signal_power,
                *noise_power,
            )?),
            ObjectiveSpec::ModPiQuadratic => Arc::new(ModPiQuadraticObjective::new(n)?),
            ObjectiveSpec::Custom(f) => f.build(n, rng)?,
        })
    }

    fn describe(&self) -> String {
        match self {
            ObjectiveSpec::Snr {
                signal_power,
                noise_power,
            } => format!("snr(ps={signal_power},sigma2={noise_power})"),
            ObjectiveSpec::ModPiQuadratic => "modpi".into(),
            ObjectiveSpec::Custom(f) => format!("custom({})", f.describe()),
        }
    }
}

/// Per-coordinate offset of the uniform measure's centre, in radians.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftRule {
    None,
    Constant(f64),
    PerCoordinate(Vec<f64>),
    /// Each coordinate drawn once from `U(-Δ₀/2, Δ₀/2)`.
    RandomHalfWidth,
}

impl ShiftRule {
    fn resolve(&self, n: usize, half_width: f64, rng: &mut SimRng) -> Result<Vec<f64>> {
        Ok(match self {
            ShiftRule::None => vec![0.0; n],
            ShiftRule::Constant(c) => vec![*c; n],
            ShiftRule::PerCoordinate(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: v.len(),
                    });
                }
                v.clone()
            }
            ShiftRule::RandomHalfWidth => (0..n)
                .map(|_| rng.random_range(-half_width / 2.0..half_width / 2.0))
                .collect(),
        })
    }
}

#[derive(Debug, Clone)]
pub enum MeasureSpec {
    /// Uniform on `[-Δ₀ + c_i, Δ₀ + c_i]` with identity transformation.
    Uniform { half_width: f64, shift: ShiftRule },
    Custom(Arc<dyn PerturbationFactory>),
}

impl MeasureSpec {
    pub fn symmetric(half_width: f64) -> Self {
        MeasureSpec::Uniform {
            half_width,
            shift: ShiftRule::None,
        }
    }

    fn build(&self, n: usize, rng: &mut SimRng) -> Result<PerturbationModel> {
        match self {
            MeasureSpec::Uniform { half_width, shift } => {
                let c = shift.resolve(n, *half_width, rng)?;
                PerturbationModel::shifted_uniform(*half_width, c)
            }
            MeasureSpec::Custom(f) => f.build(n, rng),
        }
    }

    fn describe(&self) -> String {
        match self {
            MeasureSpec::Uniform { half_width, shift } => {
                format!("uniform(d0={half_width},shift={shift:?})")
            }
            MeasureSpec::Custom(f) => format!("custom({})", f.describe()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// [`default_budget`] for the instantiated N and schedule.
    Default,
    Fixed(usize),
}

/// A dimension-free recipe for [`SearchConfig`]s, used when an experiment
/// needs configs for several N, channel draws or schedules.
#[derive(Debug, Clone)]
pub struct SearchTemplate {
    pub objective: ObjectiveSpec,
    pub measure: MeasureSpec,
    pub schedule: UpdateSchedule,
    /// `Zeros` or `UniformRandom`; given states do not generalize over N.
    pub initial: InitialState,
    pub stop: StopCriterion,
    pub budget: Budget,
    pub halt_on_hit: bool,
}

impl SearchTemplate {
    /// SNR objective, `U[-Δ₀, Δ₀]^N`, synchronous, uniform-random start,
    /// `α = 0.9`, default budget.
    pub fn new(objective: ObjectiveSpec, measure: MeasureSpec) -> Self {
        Self {
            objective,
            measure,
            schedule: UpdateSchedule::Synchronous,
            initial: InitialState::UniformRandom,
            stop: StopCriterion::AlphaThreshold { alpha: 0.9 },
            budget: Budget::Default,
            halt_on_hit: true,
        }
    }

    pub fn with_schedule(mut self, schedule: UpdateSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_stop(mut self, stop: StopCriterion) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_halt_on_hit(mut self, halt: bool) -> Self {
        self.halt_on_hit = halt;
        self
    }

    /// Builds the config for `n` transmitters. The objective draws from
    /// `channel_seed`, the measure (random shifts) from `shift_seed`.
    pub fn instantiate(&self, n: usize, channel_seed: u64, shift_seed: u64) -> Result<SearchConfig> {
        if n == 0 {
            return Err(Error::invalid("n", 0, "n >= 1"));
        }
        let objective = self.objective.build(n, &mut rng_from_seed(channel_seed))?;
        let perturbation = self.measure.build(n, &mut rng_from_seed(shift_seed))?;
        let max_iterations = match self.budget {
            Budget::Default => default_budget(n, &self.schedule),
            Budget::Fixed(b) => b,
        };
        let cfg = SearchConfig {
            objective,
            perturbation,
            schedule: self.schedule,
            initial: self.initial.clone(),
            max_iterations,
            stop: self.stop,
            halt_on_hit: self.halt_on_hit,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn describe(&self) -> String {
        format!(
            "objective={};measure={};rho={};init={:?};stop={};budget={:?};halt={}",
            self.objective.describe(),
            self.measure.describe(),
            self.schedule.rho(),
            self.initial,
            self.stop.describe(),
            self.budget,
            self.halt_on_hit
        )
    }
}
