//! Channels, objectives, perturbation measures and update schedules.

mod channel;
mod objective;
mod perturbation;
mod schedule;
mod state;

pub use channel::{sample_channels, ChannelRealization};
pub use objective::{
    evaluate_mod_quadratic, evaluate_snr, snr_global_max, ModPiQuadraticObjective, Objective,
    SnrObjective,
};
pub use perturbation::{
    check_origin_interior, sample_perturbation, Identity, Measure, OriginCheck,
    PerturbationModel, SupportBox, Transformation, UniformBox,
};
pub use schedule::{apply_mask, sample_mask, UpdateSchedule};
pub use state::PhaseState;

/// Converts degrees to radians.
pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}
