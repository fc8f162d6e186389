use crate::error::{Error, Result};
use crate::model::ChannelRealization;

/// A search point: the total received phase of every transmitter, in radians.
///
/// Phases are stored unwrapped; nothing here reduces them modulo 2π.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    theta: Vec<f64>,
}

impl PhaseState {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::invalid("theta", "[]", "at least one phase"));
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::non_finite(format!("theta[{i}]")));
        }
        Ok(Self { theta })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn dimension(&self) -> usize {
        self.theta.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.theta
    }

    /// Beamformer phase offsets `ψ_i = θ_i − φ_i` for the given channel.
    pub fn beamformer_phases(&self, channel: &ChannelRealization) -> Result<Vec<f64>> {
        if channel.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: channel.len(),
            });
        }
        Ok(self
            .theta
            .iter()
            .zip(channel.phases())
            .map(|(t, p)| t - p)
            .collect())
    }

    /// Crate-internal constructor for states produced by adding finite
    /// perturbations; callers check finiteness of the objective value instead.
    pub(crate) fn from_vec_unchecked(theta: Vec<f64>) -> Self {
        Self { theta }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(PhaseState::new(vec![]).is_err());
        assert!(matches!(
            PhaseState::new(vec![0.0, f64::NAN]),
            Err(Error::NonFinite { .. })
        ));
        assert!(PhaseState::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn beamformer_phases_subtract_channel_phase() {
        let ch = ChannelRealization::new(vec![1.0, 1.0], vec![0.5, -1.0]).unwrap();
        let s = PhaseState::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(s.beamformer_phases(&ch).unwrap(), vec![0.5, 2.0]);
        let short = PhaseState::zeros(1).unwrap();
        assert!(short.beamformer_phases(&ch).is_err());
    }
}
