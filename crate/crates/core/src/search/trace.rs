use std::io::{self, Write};

use crate::model::PhaseState;
use crate::search::StopCriterion;

/// Record of one search run.
///
/// `values[n]` is `f(θ[n])` for `n = 0..=T`; `accepted[n]` says whether the
/// perturbation drawn at iteration `n` was kept (`accepted[0]` is always
/// false).
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub values: Vec<f64>,
    pub accepted: Vec<bool>,
    pub final_state: PhaseState,
    pub hit_index: Option<usize>,
    pub stop: StopCriterion,
    pub global_max: Option<f64>,
}

impl Trace {
    /// Number of iterations performed (excludes the initial evaluation).
    pub fn iterations(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("trace holds at least f(θ[0])")
    }

    pub fn acceptances(&self) -> usize {
        self.accepted.iter().filter(|&&a| a).count()
    }

    /// Whether values never decrease and every acceptance coincides with a
    /// strict increase.
    pub fn is_consistent(&self) -> bool {
        self.values.len() == self.accepted.len()
            && !self.accepted.first().copied().unwrap_or(true)
            && self.values.windows(2).zip(&self.accepted[1..]).all(|(w, &a)| {
                if a {
                    w[1] > w[0]
                } else {
                    w[1].to_bits() == w[0].to_bits()
                }
            })
    }

    /// Writes `iter,f_value,accepted` rows after a `#` comment line with the
    /// config fingerprint and seed.
    pub fn write_csv<W: Write>(&self, mut w: W, fingerprint: &str, seed: u64) -> io::Result<()> {
        writeln!(w, "# fingerprint={fingerprint} seed={seed}")?;
        writeln!(w, "iter,f_value,accepted")?;
        for (i, (v, a)) in self.values.iter().zip(&self.accepted).enumerate() {
            writeln!(w, "{i},{v},{}", u8::from(*a))?;
        }
        Ok(())
    }
}
