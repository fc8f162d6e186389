use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Axis-aligned closed box `[lower_i, upper_i]` in R^N.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SupportBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite()) {
                return Err(Error::non_finite(format!("support bound {i}")));
            }
            if l > u {
                return Err(Error::invalid(
                    format!("support[{i}]"),
                    format!("[{l}, {u}]"),
                    "lower <= upper",
                ));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        v.len() == self.dimension()
            && v
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (l, u))| l <= x && x <= u)
    }

    /// True iff every coordinate interval straddles zero strictly.
    pub fn origin_is_interior(&self) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .all(|(&l, &u)| l < 0.0 && 0.0 < u)
    }
}

/// The probability measure `μ_n` that perturbations are drawn from.
pub trait Measure: Debug + Send + Sync {
    fn dimension(&self) -> usize;

    /// Writes one draw into `out` (length `dimension()`).
    fn sample(&self, iteration: u64, rng: &mut SimRng, out: &mut [f64]);

    /// The support at `iteration` if it is an axis-aligned box, `None` when
    /// the geometry is unknown.
    fn support(&self, iteration: u64) -> Option<SupportBox>;

    fn is_time_varying(&self) -> bool {
        false
    }

    fn describe(&self) -> String;
}

/// The transformation `G_n` applied to each draw.
pub trait Transformation: Debug + Send + Sync {
    fn apply(&self, iteration: u64, v: &mut [f64]);

    /// Image of a box under `G_n`, if it is again a box that can be stated
    /// exactly.
    fn image(&self, iteration: u64, support: &SupportBox) -> Option<SupportBox>;

    fn is_time_varying(&self) -> bool {
        false
    }

    fn describe(&self) -> String;
}

/// Uniform distribution on a box. Covers both the symmetric
/// `U[-Δ₀, Δ₀]^N` measure and its shifted variant.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    support: SupportBox,
}

impl UniformBox {
    /// `U[-half_width, half_width]^n`.
    pub fn symmetric(n: usize, half_width: f64) -> Result<Self> {
        Self::shifted(half_width, vec![0.0; n])
    }

    /// `U[-half_width + c_i, half_width + c_i]` per coordinate.
    pub fn shifted(half_width: f64, shift: Vec<f64>) -> Result<Self> {
        if shift.is_empty() {
            return Err(Error::invalid("n", 0, "n >= 1"));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid("delta0", half_width, "finite delta0 > 0"));
        }
        let lower = shift.iter().map(|c| c - half_width).collect();
        let upper = shift.iter().map(|c| c + half_width).collect();
        Ok(Self {
            support: SupportBox::new(lower, upper)?,
        })
    }

    pub fn from_box(support: SupportBox) -> Self {
        Self { support }
    }
}

impl Measure for UniformBox {
    fn dimension(&self) -> usize {
        self.support.dimension()
    }

    fn sample(&self, _iteration: u64, rng: &mut SimRng, out: &mut [f64]) {
        for (o, (l, u)) in out
            .iter_mut()
            .zip(self.support.lower.iter().zip(&self.support.upper))
        {
            let r: f64 = rng.random();
            // Clamp guards against l + (u - l) * r rounding past u.
            *o = (l + (u - l) * r).min(*u);
        }
    }

    fn support(&self, _iteration: u64) -> Option<SupportBox> {
        Some(self.support.clone())
    }

    fn describe(&self) -> String {
        let fmt = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        format!(
            "uniform(lo={},hi={})",
            fmt(&self.support.lower),
            fmt(&self.support.upper)
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Identity;

impl Transformation for Identity {
    fn apply(&self, _iteration: u64, _v: &mut [f64]) {}

    fn image(&self, _iteration: u64, support: &SupportBox) -> Option<SupportBox> {
        Some(support.clone())
    }

    fn describe(&self) -> String {
        "identity".into()
    }
}

/// A measure together with the transformation applied to its draws.
#[derive(Debug, Clone)]
pub struct PerturbationModel {
    measure: Arc<dyn Measure>,
    transformation: Arc<dyn Transformation>,
}

impl PerturbationModel {
    pub fn new(measure: Arc<dyn Measure>, transformation: Arc<dyn Transformation>) -> Self {
        Self {
            measure,
            transformation,
        }
    }

    /// Identity-transformed draws from `measure`.
    pub fn identity(measure: impl Measure + 'static) -> Self {
        Self::new(Arc::new(measure), Arc::new(Identity))
    }

    pub fn symmetric_uniform(n: usize, half_width: f64) -> Result<Self> {
        Ok(Self::identity(UniformBox::symmetric(n, half_width)?))
    }

    pub fn shifted_uniform(half_width: f64, shift: Vec<f64>) -> Result<Self> {
        Ok(Self::identity(UniformBox::shifted(half_width, shift)?))
    }

    pub fn dimension(&self) -> usize {
        self.measure.dimension()
    }

    pub fn measure(&self) -> &dyn Measure {
        self.measure.as_ref()
    }

    pub fn transformation(&self) -> &dyn Transformation {
        self.transformation.as_ref()
    }

    pub fn is_time_varying(&self) -> bool {
        self.measure.is_time_varying() || self.transformation.is_time_varying()
    }

    /// Support of the transformed perturbation `Γ_n`, when known.
    pub fn transformed_support(&self, iteration: u64) -> Option<SupportBox> {
        let s = self.measure.support(iteration)?;
        self.transformation.image(iteration, &s)
    }

    /// Draws `G_n(δ)` into `out`.
    pub fn sample_into(&self, iteration: u64, rng: &mut SimRng, out: &mut [f64]) {
        self.measure.sample(iteration, rng, out);
        self.transformation.apply(iteration, out);
    }

    pub fn describe(&self) -> String {
        format!(
            "{}|{}",
            self.measure.describe(),
            self.transformation.describe()
        )
    }
}

/// Draws one transformed perturbation `G_n(δ)`, `δ ~ μ_n`.
pub fn sample_perturbation(model: &PerturbationModel, iteration: u64, rng: &mut SimRng) -> Vec<f64> {
    let mut out = vec![0.0; model.dimension()];
    model.sample_into(iteration, rng, &mut out);
    out
}

/// Outcome of testing whether the origin is interior to `Γ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginCheck {
    Interior,
    NotInterior,
    /// The support geometry is not a known box.
    Undecidable,
}

impl OriginCheck {
    pub fn is_interior(self) -> bool {
        self == OriginCheck::Interior
    }
}

/// Checks whether a ball around zero lies inside the transformed support.
pub fn check_origin_interior(model: &PerturbationModel, iteration: u64) -> OriginCheck {
    match model.transformed_support(iteration) {
        Some(b) if b.origin_is_interior() => OriginCheck::Interior,
        Some(_) => OriginCheck::NotInterior,
        None => OriginCheck::Undecidable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    const D0: f64 = 5.0 * std::f64::consts::PI / 180.0;

    #[derive(Debug)]
    struct Opaque;

    impl Measure for Opaque {
        fn dimension(&self) -> usize {
            2
        }
        fn sample(&self, _: u64, _: &mut SimRng, out: &mut [f64]) {
            out.fill(0.0);
        }
        fn support(&self, _: u64) -> Option<SupportBox> {
            None
        }
        fn describe(&self) -> String {
            "opaque".into()
        }
    }

    #[test]
    fn symmetric_support_contains_draws() {
        let m = PerturbationModel::symmetric_uniform(50, D0).unwrap();
        let mut rng = rng_from_seed(5);
        for n in 0..1000 {
            let d = sample_perturbation(&m, n, &mut rng);
            assert_eq!(d.len(), 50);
            assert!(d.iter().all(|x| (-D0..=D0).contains(x)));
        }
    }

    #[test]
    fn shifted_support_contains_draws() {
        let c = 2f64.to_radians();
        let m = PerturbationModel::shifted_uniform(D0, vec![c; 10]).unwrap();
        let (lo, hi) = ((-3f64).to_radians(), 7f64.to_radians());
        let mut rng = rng_from_seed(6);
        for n in 0..1000 {
            let d = sample_perturbation(&m, n, &mut rng);
            assert!(d.iter().all(|x| *x >= lo - 1e-15 && *x <= hi + 1e-15));
        }
    }

    #[test]
    fn origin_interior_examples() {
        let sym = PerturbationModel::symmetric_uniform(3, D0).unwrap();
        assert_eq!(check_origin_interior(&sym, 0), OriginCheck::Interior);
        let half = PerturbationModel::shifted_uniform(D0, vec![D0 / 2.0; 3]).unwrap();
        assert_eq!(check_origin_interior(&half, 0), OriginCheck::Interior);
        let far = PerturbationModel::shifted_uniform(D0, vec![2.0 * D0; 3]).unwrap();
        assert_eq!(check_origin_interior(&far, 0), OriginCheck::NotInterior);
        // Shift exactly Δ₀ puts zero on the boundary: not interior.
        let edge = PerturbationModel::shifted_uniform(D0, vec![0.0, D0]).unwrap();
        assert_eq!(check_origin_interior(&edge, 0), OriginCheck::NotInterior);
        let opaque = PerturbationModel::identity(Opaque);
        assert_eq!(check_origin_interior(&opaque, 0), OriginCheck::Undecidable);
    }

    #[test]
    fn bad_boxes_rejected() {
        assert!(UniformBox::symmetric(0, D0).is_err());
        assert!(UniformBox::symmetric(3, 0.0).is_err());
        assert!(SupportBox::new(vec![1.0], vec![0.0]).is_err());
        assert!(SupportBox::new(vec![0.0], vec![0.0, 1.0]).is_err());
    }
}
