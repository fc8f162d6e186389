use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::model::{ChannelRealization, PhaseState};

/// A function `f: Θ → R` that the search maximizes using only its samples.
///
/// `evaluate` must be deterministic and is called with a slice of length
/// [`dimension`](Objective::dimension). When the maximum value is known in
/// closed form, `global_max_value` returns it so that α-thresholds and
/// ε-regions can be formed.
pub trait Objective: Debug + Send + Sync {
    fn dimension(&self) -> usize;

    fn evaluate(&self, theta: &[f64]) -> f64;

    fn global_max_value(&self) -> Option<f64> {
        None
    }

    /// Short stable description used in config fingerprints.
    fn describe(&self) -> String;
}

/// Received SNR of a phase-only distributed beamformer,
/// `P_s |Σ a_i e^{jθ_i}|² / σ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrObjective {
    channel: ChannelRealization,
    signal_power: f64,
    noise_power: f64,
}

impl SnrObjective {
    pub fn new(channel: ChannelRealization, signal_power: f64, noise_power: f64) -> Result<Self> {
        if !(signal_power.is_finite() && signal_power > 0.0) {
            return Err(Error::invalid("signal_power", signal_power, "finite P_s > 0"));
        }
        if !(noise_power.is_finite() && noise_power > 0.0) {
            return Err(Error::invalid("noise_power", noise_power, "finite sigma^2 > 0"));
        }
        Ok(Self {
            channel,
            signal_power,
            noise_power,
        })
    }

    pub fn channel(&self) -> &ChannelRealization {
        &self.channel
    }

    pub fn signal_power(&self) -> f64 {
        self.signal_power
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    fn snr(&self, theta: &[f64]) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (&a, &t) in self.channel.gains().iter().zip(theta) {
            let (s, c) = t.sin_cos();
            re += a * c;
            im += a * s;
        }
        self.signal_power * (re * re + im * im) / self.noise_power
    }
}

impl Objective for SnrObjective {
    fn dimension(&self) -> usize {
        self.channel.len()
    }

    fn evaluate(&self, theta: &[f64]) -> f64 {
        self.snr(theta)
    }

    fn global_max_value(&self) -> Option<f64> {
        Some(snr_global_max(self))
    }

    fn describe(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        format!(
            "snr(n={},ps={},sigma2={},a={},phi={})",
            self.channel.len(),
            self.signal_power,
            self.noise_power,
            join(self.channel.gains()),
            join(self.channel.phases())
        )
    }
}

/// Evaluates the received SNR at `theta`, checking dimensions.
pub fn evaluate_snr(theta: &PhaseState, obj: &SnrObjective) -> Result<f64> {
    if theta.dimension() != obj.dimension() {
        return Err(Error::DimensionMismatch {
            expected: obj.dimension(),
            found: theta.dimension(),
        });
    }
    Ok(obj.snr(theta.as_slice()))
}

/// `P_s (Σ a_i)² / σ²`, reached whenever all received phases coincide.
pub fn snr_global_max(obj: &SnrObjective) -> f64 {
    let sum: f64 = obj.channel.gains().iter().sum();
    obj.signal_power * (sum * sum) / obj.noise_power
}

/// `Σ_i [(π/2)² − ((θ_i mod π) − π/2)²]`: a separable objective with its
/// maxima on `θ_i ≡ π/2 (mod π)` and no other local maxima.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModPiQuadraticObjective {
    dimension: usize,
}

impl ModPiQuadraticObjective {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("n", 0, "n >= 1"));
        }
        Ok(Self { dimension })
    }
}

fn mod_quadratic_sum(theta: &[f64]) -> f64 {
    let peak = FRAC_PI_2 * FRAC_PI_2;
    theta
        .iter()
        .map(|&t| {
            // rem_euclid lands in [0, π] and can round up to π itself.
            let mut r = t.rem_euclid(PI);
            if r >= PI {
                r = 0.0;
            }
            let d = r - FRAC_PI_2;
            peak - d * d
        })
        .sum()
}

impl Objective for ModPiQuadraticObjective {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, theta: &[f64]) -> f64 {
        mod_quadratic_sum(theta)
    }

    fn global_max_value(&self) -> Option<f64> {
        Some(self.dimension as f64 * FRAC_PI_2 * FRAC_PI_2)
    }

    fn describe(&self) -> String {
        format!("modpi(n={})", self.dimension)
    }
}

/// Evaluates the modulo-π quadratic objective at `theta`.
pub fn evaluate_mod_quadratic(theta: &PhaseState) -> f64 {
    mod_quadratic_sum(theta.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snr_obj(gains: &[f64], ps: f64, s2: f64) -> SnrObjective {
        let ch = ChannelRealization::new(gains.to_vec(), vec![0.0; gains.len()]).unwrap();
        SnrObjective::new(ch, ps, s2).unwrap()
    }

    fn state(v: &[f64]) -> PhaseState {
        PhaseState::new(v.to_vec()).unwrap()
    }

    #[test]
    fn snr_examples() {
        let o = snr_obj(&[1.0, 1.0], 1.0, 1.0);
        assert_eq!(evaluate_snr(&state(&[0.0, 0.0]), &o).unwrap(), 4.0);
        assert!(evaluate_snr(&state(&[0.0, PI]), &o).unwrap().abs() < 1e-30);

        // |1 + 2j − 3|² = 8, divided by σ² = 2.
        let o = snr_obj(&[1.0, 2.0, 3.0], 1.0, 2.0);
        let v = evaluate_snr(&state(&[0.0, FRAC_PI_2, PI]), &o).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn snr_dimension_mismatch() {
        let o = snr_obj(&[1.0, 1.0], 1.0, 1.0);
        assert!(matches!(
            evaluate_snr(&state(&[0.0]), &o),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn snr_global_max_examples() {
        assert_eq!(snr_global_max(&snr_obj(&[1.0, 1.0], 1.0, 1.0)), 4.0);
        assert_eq!(snr_global_max(&snr_obj(&[3.0], 2.0, 1.0)), 18.0);
        assert_eq!(snr_global_max(&snr_obj(&[1.0, 2.0, 3.0], 1.0, 2.0)), 18.0);
    }

    #[test]
    fn snr_rejects_bad_powers() {
        let ch = ChannelRealization::unit(2).unwrap();
        assert!(SnrObjective::new(ch.clone(), 0.0, 1.0).is_err());
        assert!(SnrObjective::new(ch, 1.0, -1.0).is_err());
    }

    #[test]
    fn mod_quadratic_examples() {
        let peak = FRAC_PI_2 * FRAC_PI_2;
        let v = evaluate_mod_quadratic(&state(&[FRAC_PI_2, FRAC_PI_2]));
        assert!((v - 2.0 * peak).abs() < 1e-12);
        assert_eq!(evaluate_mod_quadratic(&state(&[0.0])), 0.0);
        let v = evaluate_mod_quadratic(&state(&[3.0 * FRAC_PI_2]));
        assert!((v - peak).abs() < 1e-12);
        assert!((peak - 2.4674).abs() < 1e-4);
    }

    #[test]
    fn mod_quadratic_reduces_negative_inputs() {
        let a = evaluate_mod_quadratic(&state(&[-0.3]));
        let b = evaluate_mod_quadratic(&state(&[PI - 0.3]));
        assert!((a - b).abs() < 1e-12);
        // Tiny negative inputs round to π under rem_euclid; they must map to 0.
        let v = evaluate_mod_quadratic(&state(&[-1e-18]));
        assert!(v.abs() < 1e-12);
    }
}
