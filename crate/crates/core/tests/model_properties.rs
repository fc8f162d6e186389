use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use beamsearch::model::*;
use beamsearch::rng::rng_from_seed;

fn snr_oracle(gains: &[f64], theta: &[f64], ps: f64, s2: f64) -> f64 {
    let sum: Complex64 = gains
        .iter()
        .zip(theta)
        .map(|(&a, &t)| Complex64::from_polar(a, t))
        .sum();
    ps * sum.norm_sqr() / s2
}

fn random_objective(n: usize, seed: u64) -> SnrObjective {
    let mut rng = rng_from_seed(seed);
    SnrObjective::new(sample_channels(n, &mut rng).unwrap(), 1.5, 0.7).unwrap()
}

fn phase_chi_square(seed: u64, n: usize, bins: usize) -> f64 {
    let ch = sample_channels(n, &mut rng_from_seed(seed)).unwrap();
    let mut counts = vec![0usize; bins];
    for &p in ch.phases() {
        let k = (((p + PI) / (2.0 * PI)) * bins as f64) as usize;
        counts[k.min(bins - 1)] += 1;
    }
    let expected = n as f64 / bins as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

#[test]
fn channel_phases_pass_chi_square_uniformity() {
    let critical = ChiSquared::new(9.0).unwrap().inverse_cdf(0.99);
    let stat = phase_chi_square(2026, 1000, 10);
    assert!(stat < critical, "chi2 {stat} >= {critical}");
}

#[test]
fn chi_square_rejection_rate_is_nominal() {
    let critical = ChiSquared::new(9.0).unwrap().inverse_cdf(0.99);
    let trials = 2000;
    let rejected = (0..trials)
        .filter(|&s| phase_chi_square(s, 1000, 10) >= critical)
        .count();
    // Binomial(2000, 0.01): mean 20, sd about 4.45.
    assert!(rejected <= 40, "{rejected} rejections in {trials}");
}

#[test]
fn snr_matches_complex_arithmetic() {
    let mut rng = rng_from_seed(1234);
    for _ in 0..2000 {
        let n = rng.random_range(1..40);
        let gains: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let (ps, s2) = (rng.random_range(0.1..10.0), rng.random_range(0.1..10.0));
        let ch = ChannelRealization::new(gains.clone(), vec![0.0; n]).unwrap();
        let obj = SnrObjective::new(ch, ps, s2).unwrap();
        let got = evaluate_snr(&PhaseState::new(theta.clone()).unwrap(), &obj).unwrap();
        let want = snr_oracle(&gains, &theta, ps, s2);
        let rel = (got - want).abs() / want.abs().max(1e-300);
        assert!(rel < 1e-12 || (got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn perturbation_mean_is_zero_without_shift() {
    let d0 = 5f64.to_radians();
    let n = 4;
    let m = PerturbationModel::symmetric_uniform(n, d0).unwrap();
    let mut rng = rng_from_seed(8);
    let mut sums = vec![0.0; n];
    let draws = 100_000;
    for it in 0..draws {
        for (s, d) in sums.iter_mut().zip(sample_perturbation(&m, it, &mut rng)) {
            *s += d;
        }
    }
    for s in sums {
        let mean_deg = (s / draws as f64).to_degrees();
        assert!(mean_deg.abs() < 0.1, "mean {mean_deg} deg");
    }
}

#[test]
fn seeded_samples_are_bitwise_identical() {
    let m = PerturbationModel::shifted_uniform(0.1, vec![0.01, -0.02, 0.0]).unwrap();
    let sched = UpdateSchedule::asynchronous(0.3).unwrap();
    let draw = || {
        let mut rng = rng_from_seed(31337);
        let ch = sample_channels(3, &mut rng).unwrap();
        let d: Vec<u64> = (0..50)
            .flat_map(|i| sample_perturbation(&m, i, &mut rng))
            .map(f64::to_bits)
            .collect();
        let k = sample_mask(&sched, 3, &mut rng);
        (ch, d, k)
    };
    assert_eq!(draw(), draw());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snr_is_two_pi_periodic(seed in any::<u64>(), theta in prop::collection::vec(-20.0f64..20.0, 6), i in 0usize..6) {
        let obj = random_objective(6, seed);
        let mut shifted = theta.clone();
        shifted[i] += 2.0 * PI;
        let a = obj.evaluate(&theta);
        let b = obj.evaluate(&shifted);
        let scale = snr_global_max(&obj);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-9 * scale), "{} vs {}", a, b);
    }

    #[test]
    fn snr_within_bounds(seed in any::<u64>(), theta in prop::collection::vec(-10.0f64..10.0, 8)) {
        let obj = random_objective(8, seed);
        let v = obj.evaluate(&theta);
        prop_assert!(v >= 0.0);
        prop_assert!(v <= snr_global_max(&obj) * (1.0 + 1e-12));
    }

    #[test]
    fn constant_phase_attains_snr_max(seed in any::<u64>(), c in -10.0f64..10.0) {
        let obj = random_objective(7, seed);
        let v = obj.evaluate(&[c; 7]);
        let g = snr_global_max(&obj);
        prop_assert!((v - g).abs() <= 1e-12 * g);
    }

    #[test]
    fn mod_quadratic_within_bounds(theta in prop::collection::vec(-50.0f64..50.0, 1..20)) {
        let n = theta.len();
        let v = evaluate_mod_quadratic(&PhaseState::new(theta).unwrap());
        prop_assert!(v >= -1e-12);
        prop_assert!(v <= n as f64 * FRAC_PI_2 * FRAC_PI_2 + 1e-12);
    }

    #[test]
    fn mod_quadratic_below_max_off_peak(
        theta in prop::collection::vec(-50.0f64..50.0, 1..10),
        k in -5i32..5,
        off in 0.01f64..1.5,
    ) {
        let n = theta.len();
        let max = n as f64 * FRAC_PI_2 * FRAC_PI_2;
        let mut at_peak = vec![FRAC_PI_2 + k as f64 * PI; n];
        let v = evaluate_mod_quadratic(&PhaseState::new(at_peak.clone()).unwrap());
        prop_assert!((v - max).abs() < 1e-9);
        at_peak[0] += off;
        let v = evaluate_mod_quadratic(&PhaseState::new(at_peak).unwrap());
        prop_assert!(v < max - 1e-6);
    }

    #[test]
    fn masked_perturbations_stay_in_support(
        seed in any::<u64>(),
        d0_deg in 0.5f64..30.0,
        shift_deg in -40.0f64..40.0,
        p in 0.05f64..=1.0,
    ) {
        let n = 12;
        let d0 = d0_deg.to_radians();
        let model = PerturbationModel::shifted_uniform(d0, vec![shift_deg.to_radians(); n]).unwrap();
        let support = model.transformed_support(0).unwrap();
        let sched = UpdateSchedule::asynchronous(p).unwrap();
        let mut rng = rng_from_seed(seed);
        for it in 0..50 {
            let mut d = sample_perturbation(&model, it, &mut rng);
            prop_assert!(support.contains(&d));
            let mask = sample_mask(&sched, n, &mut rng);
            apply_mask(&mask, &mut d);
            for ((x, &m), (lo, hi)) in d.iter().zip(&mask).zip(support.lower().iter().zip(support.upper())) {
                if m {
                    prop_assert!(lo <= x && x <= hi);
                } else {
                    prop_assert_eq!(*x, 0.0);
                }
            }
        }
    }
}
