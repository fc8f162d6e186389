use rand::RngCore;

use crate::error::{Error, Result};
use crate::model::PhaseState;
use crate::rng::{rng_from_seed, SimRng};
use crate::search::SearchConfig;

/// Fraction of `samples` masked, transformed perturbations that strictly
/// improve the objective at a fixed `theta`.
///
/// Perturbations and masks come from separate streams seeded from `rng`, so
/// two configs that differ only in schedule see the same perturbations.
pub fn improvement_probability_estimate(
    theta: &PhaseState,
    config: &SearchConfig,
    samples: usize,
    rng: &mut SimRng,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::invalid("samples", 0, "samples >= 1"));
    }
    config.validate()?;
    let n = config.dimension();
    if theta.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: theta.dimension(),
        });
    }
    let mut pert_rng = rng_from_seed(rng.next_u64());
    let mut mask_rng = rng_from_seed(rng.next_u64());
    let objective = config.objective.as_ref();
    let base = theta.as_slice();
    let current = objective.evaluate(base);
    if !current.is_finite() {
        return Err(Error::non_finite("objective value at theta"));
    }

    let mut delta = vec![0.0; n];
    let mut mask = vec![true; n];
    let mut candidate = vec![0.0; n];
    let mut improved = 0usize;
    for _ in 0..samples {
        config.perturbation.sample_into(1, &mut pert_rng, &mut delta);
        config.schedule.fill_mask(&mut mask_rng, &mut mask);
        for i in 0..n {
            candidate[i] = if mask[i] { base[i] + delta[i] } else { base[i] };
        }
        let v = objective.evaluate(&candidate);
        if !v.is_finite() {
            return Err(Error::non_finite("objective value at sampled candidate"));
        }
        if v > current {
            improved += 1;
        }
    }
    Ok(improved as f64 / samples as f64)
}
