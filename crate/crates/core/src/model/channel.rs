use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Time-invariant flat-fading gains `h_i = a_i e^{jφ_i}` for N transmitters,
/// stored as amplitude and phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    gains: Vec<f64>,
    phases: Vec<f64>,
}

impl ChannelRealization {
    pub fn new(gains: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::invalid("gains", "[]", "at least one transmitter"));
        }
        if gains.len() != phases.len() {
            return Err(Error::DimensionMismatch {
                expected: gains.len(),
                found: phases.len(),
            });
        }
        for (i, &a) in gains.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::non_finite(format!("gains[{i}]")));
            }
            if a < 0.0 {
                return Err(Error::invalid(format!("gains[{i}]"), a, "a_i >= 0"));
            }
        }
        if let Some(i) = phases.iter().position(|p| !p.is_finite()) {
            return Err(Error::non_finite(format!("phases[{i}]")));
        }
        Ok(Self { gains, phases })
    }

    /// Unit gains with zero phase.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n], vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }
}

/// Draws `n` i.i.d. CN(0,1) channel coefficients.
///
/// Real and imaginary parts are independent N(0, 1/2); the result is stored as
/// a Rayleigh amplitude with unit mean square and a phase in `[-π, π)`.
pub fn sample_channels<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ChannelRealization> {
    if n == 0 {
        return Err(Error::invalid("n", 0, "n >= 1"));
    }
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid std dev");
    let mut gains = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    for _ in 0..n {
        let re: f64 = normal.sample(rng);
        let im: f64 = normal.sample(rng);
        gains.push(re.hypot(im));
        let phi = im.atan2(re);
        // atan2 can return +π; fold it onto the closed end of [-π, π).
        phases.push(if phi >= PI { -PI } else { phi });
    }
    ChannelRealization::new(gains, phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn zero_transmitters_rejected() {
        assert!(sample_channels(0, &mut rng_from_seed(1)).is_err());
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = sample_channels(3, &mut rng_from_seed(11)).unwrap();
        let b = sample_channels(3, &mut rng_from_seed(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_square_gain_near_one() {
        let ch = sample_channels(1000, &mut rng_from_seed(2024)).unwrap();
        let ms = ch.gains().iter().map(|a| a * a).sum::<f64>() / 1000.0;
        assert!((0.9..=1.1).contains(&ms), "mean square {ms}");
    }

    #[test]
    fn phases_in_half_open_range() {
        let ch = sample_channels(5000, &mut rng_from_seed(3)).unwrap();
        assert!(ch.phases().iter().all(|&p| (-PI..PI).contains(&p)));
    }

    #[test]
    fn invalid_realizations_rejected() {
        assert!(ChannelRealization::new(vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(ChannelRealization::new(vec![-1.0], vec![0.0]).is_err());
        assert!(ChannelRealization::new(vec![1.0], vec![f64::NAN]).is_err());
    }
}
