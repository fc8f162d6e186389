use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Which transmitters perturb their phase in a slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateSchedule {
    /// Every transmitter perturbs every slot.
    Synchronous,
    /// Each transmitter perturbs independently with probability `p` per slot.
    Asynchronous { p: f64 },
}

impl UpdateSchedule {
    pub fn asynchronous(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid("p", p, "0 < p <= 1"));
        }
        Ok(UpdateSchedule::Asynchronous { p })
    }

    /// Builds the schedule for an update percentage `rho` in (0, 100];
    /// `rho = 100` is the synchronous scheme.
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 100.0) {
            return Err(Error::invalid("rho", rho, "0 < rho <= 100"));
        }
        if rho == 100.0 {
            Ok(UpdateSchedule::Synchronous)
        } else {
            Self::asynchronous(rho / 100.0)
        }
    }

    pub fn update_probability(&self) -> f64 {
        match *self {
            UpdateSchedule::Synchronous => 1.0,
            UpdateSchedule::Asynchronous { p } => p,
        }
    }

    pub fn rho(&self) -> f64 {
        self.update_probability() * 100.0
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            UpdateSchedule::Synchronous => Ok(()),
            UpdateSchedule::Asynchronous { p } => Self::asynchronous(p).map(|_| ()),
        }
    }

    /// Fills `mask` for one slot. A probability of one consumes no randomness,
    /// so `p = 1` reproduces the synchronous scheme draw for draw.
    pub fn fill_mask(&self, rng: &mut SimRng, mask: &mut [bool]) {
        let p = self.update_probability();
        if p >= 1.0 {
            mask.fill(true);
        } else {
            for m in mask.iter_mut() {
                *m = rng.random::<f64>() < p;
            }
        }
    }
}

/// Draws an update mask of length `n`.
pub fn sample_mask(schedule: &UpdateSchedule, n: usize, rng: &mut SimRng) -> Vec<bool> {
    let mut mask = vec![false; n];
    schedule.fill_mask(rng, &mut mask);
    mask
}

/// Zeroes the coordinates of `perturbation` whose transmitter stays idle.
pub fn apply_mask(mask: &[bool], perturbation: &mut [f64]) {
    for (d, &m) in perturbation.iter_mut().zip(mask) {
        if !m {
            *d = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn synchronous_is_all_ones() {
        let mut rng = rng_from_seed(1);
        assert!(sample_mask(&UpdateSchedule::Synchronous, 64, &mut rng)
            .iter()
            .all(|&m| m));
        let p1 = UpdateSchedule::asynchronous(1.0).unwrap();
        assert!(sample_mask(&p1, 64, &mut rng).iter().all(|&m| m));
    }

    #[test]
    fn half_probability_fraction() {
        let s = UpdateSchedule::asynchronous(0.5).unwrap();
        let mut rng = rng_from_seed(77);
        let mut mask = vec![false; 100];
        let mut ones = 0usize;
        for _ in 0..100_000 {
            s.fill_mask(&mut rng, &mut mask);
            ones += mask.iter().filter(|&&m| m).count();
        }
        let frac = ones as f64 / 1e7;
        assert!((0.49..=0.51).contains(&frac), "{frac}");
    }

    #[test]
    fn zero_mask_zeroes_perturbation() {
        let mut d = vec![0.3, -0.2, 0.1];
        apply_mask(&[false; 3], &mut d);
        assert_eq!(d, vec![0.0; 3]);
    }

    #[test]
    fn rho_range() {
        assert!(UpdateSchedule::from_rho(0.0).is_err());
        assert!(UpdateSchedule::from_rho(100.5).is_err());
        assert_eq!(
            UpdateSchedule::from_rho(100.0).unwrap(),
            UpdateSchedule::Synchronous
        );
        assert_eq!(
            UpdateSchedule::from_rho(50.0).unwrap(),
            UpdateSchedule::Asynchronous { p: 0.5 }
        );
        assert!(UpdateSchedule::asynchronous(0.0).is_err());
        assert!(UpdateSchedule::asynchronous(f64::NAN).is_err());
    }
}
