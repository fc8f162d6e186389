use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use beamsearch::experiments::improvement_probability_estimate;
use beamsearch::model::*;
use beamsearch::rng::rng_from_seed;
use beamsearch::search::*;

const D0: f64 = 5.0 * PI / 180.0;

fn snr(n: usize, seed: u64) -> Arc<SnrObjective> {
    Arc::new(SnrObjective::new(sample_channels(n, &mut rng_from_seed(seed)).unwrap(), 1.0, 1.0).unwrap())
}

/// `h(f) = f³`, strictly increasing on the non-negative range of the objectives.
#[derive(Debug)]
struct Cubed(Arc<dyn Objective>);

impl Objective for Cubed {
    fn dimension(&self) -> usize {
        self.0.dimension()
    }
    fn evaluate(&self, theta: &[f64]) -> f64 {
        self.0.evaluate(theta).powi(3)
    }
    fn global_max_value(&self) -> Option<f64> {
        self.0.global_max_value().map(|g| g.powi(3))
    }
    fn describe(&self) -> String {
        format!("cubed({})", self.0.describe())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_are_monotone_and_flags_exact(
        seed in any::<u64>(),
        n in 2usize..30,
        p in 0.1f64..=1.0,
        modpi in any::<bool>(),
        shift_deg in -2.5f64..2.5,
    ) {
        let objective: Arc<dyn Objective> = if modpi {
            Arc::new(ModPiQuadraticObjective::new(n).unwrap())
        } else {
            snr(n, seed ^ 1)
        };
        let cfg = SearchConfig::new(
            objective,
            PerturbationModel::shifted_uniform(D0, vec![shift_deg.to_radians(); n]).unwrap(),
        )
        .with_schedule(UpdateSchedule::asynchronous(p).unwrap())
        .with_max_iterations(500)
        .with_halt_on_hit(false);
        let t = run_seeded(&cfg, seed).unwrap();
        prop_assert_eq!(t.values.len(), 501);
        prop_assert!(t.is_consistent());
        for w in t.values.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }
}

#[test]
fn no_acceptance_from_a_maximizer() {
    let obj = snr(20, 4);
    // θ_i = c for all i maximizes the SNR for any channel.
    let start = PhaseState::new(vec![0.7; 20]).unwrap();
    let cfg = SearchConfig::new(obj, PerturbationModel::symmetric_uniform(20, D0).unwrap())
        .with_initial(InitialState::Given(start.clone()))
        .with_stop(StopCriterion::BudgetOnly)
        .with_max_iterations(2000);
    let t = run_seeded(&cfg, 17).unwrap();
    assert_eq!(t.acceptances(), 0);
    assert_eq!(t.final_state, start);
}

#[test]
fn acceptance_depends_only_on_sign() {
    for seed in 0..5u64 {
        let base = snr(30, seed);
        let mk = |o: Arc<dyn Objective>| {
            SearchConfig::new(o, PerturbationModel::symmetric_uniform(30, D0).unwrap())
                .with_stop(StopCriterion::BudgetOnly)
                .with_max_iterations(1500)
        };
        let a = run_seeded(&mk(base.clone()), seed).unwrap();
        let b = run_seeded(&mk(Arc::new(Cubed(base))), seed).unwrap();
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.final_state, b.final_state);
    }
}

#[test]
fn asynchronous_p_one_equals_synchronous() {
    let obj = snr(25, 2);
    let sync = SearchConfig::new(obj, PerturbationModel::symmetric_uniform(25, D0).unwrap());
    let p1 = sync
        .clone()
        .with_schedule(UpdateSchedule::Asynchronous { p: 1.0 });
    assert_eq!(run_seeded(&sync, 5).unwrap(), run_seeded(&p1, 5).unwrap());
}

#[test]
fn asynchronous_runs_stay_monotone_and_converge() {
    let obj = snr(40, 3);
    let cfg = SearchConfig::new(obj, PerturbationModel::symmetric_uniform(40, D0).unwrap())
        .with_schedule(UpdateSchedule::from_rho(25.0).unwrap());
    assert_eq!(cfg.max_iterations, 200 * 40 * 4);
    let t = run_seeded(&cfg, 8).unwrap();
    assert!(t.is_consistent());
    assert!(t.hit_index.is_some());
    assert_eq!(hitting_time(&t), t.hit_index);
}

#[test]
fn continue_after_hit_runs_full_budget() {
    let obj = snr(10, 1);
    let cfg = SearchConfig::new(obj, PerturbationModel::symmetric_uniform(10, D0).unwrap())
        .with_max_iterations(3000)
        .with_halt_on_hit(false);
    let t = run_seeded(&cfg, 1).unwrap();
    assert_eq!(t.values.len(), 3001);
    let h = t.hit_index.expect("converges well within budget");
    assert_eq!(hitting_time(&t), Some(h));
    assert!(h < 3000);
}

#[test]
fn improvement_probability_examples() {
    let pair = Arc::new(SnrObjective::new(ChannelRealization::unit(2).unwrap(), 1.0, 1.0).unwrap());
    let sync = SearchConfig::new(pair.clone(), PerturbationModel::symmetric_uniform(2, D0).unwrap());

    let at_max = PhaseState::zeros(2).unwrap();
    let p = improvement_probability_estimate(&at_max, &sync, 10_000, &mut rng_from_seed(1)).unwrap();
    assert_eq!(p, 0.0);

    // Antipodal pair: any nonzero relative rotation improves.
    let worst = PhaseState::new(vec![0.0, PI]).unwrap();
    let p = improvement_probability_estimate(&worst, &sync, 10_000, &mut rng_from_seed(2)).unwrap();
    assert_eq!(p, 1.0);

    let mid = PhaseState::new(vec![0.0, PI / 2.0]).unwrap();
    let ps = improvement_probability_estimate(&mid, &sync, 10_000, &mut rng_from_seed(3)).unwrap();
    assert!((ps - 0.5).abs() < 0.03, "{ps}");

    let asy = sync.clone().with_schedule(UpdateSchedule::from_rho(50.0).unwrap());
    let pa = improvement_probability_estimate(&mid, &asy, 10_000, &mut rng_from_seed(3)).unwrap();
    let se = (ps * (1.0 - ps) / 10_000.0).sqrt();
    assert!(pa > 0.0, "{pa}");
    assert!(pa <= ps + 3.0 * se, "async {pa} vs sync {ps}");
    // Masked-out draws never improve: 0.25 * 0 + 0.75 * 0.5.
    assert!((pa - 0.375).abs() < 0.03, "{pa}");

    assert!(improvement_probability_estimate(&worst, &sync, 0, &mut rng_from_seed(2)).is_err());
}

#[test]
fn improvement_probability_positive_outside_region() {
    // Fixed θ outside R_ε: strictly positive fraction of improving draws.
    let obj = snr(50, 12);
    let cfg = SearchConfig::new(obj.clone(), PerturbationModel::symmetric_uniform(50, D0).unwrap());
    let mut rng = rng_from_seed(4);
    let theta = InitialState::UniformRandom.materialize(50, &mut rng).unwrap();
    assert!(!in_epsilon_region(&theta, obj.as_ref(), 0.1 * snr_global_max(&obj)).unwrap());
    let p = improvement_probability_estimate(&theta, &cfg, 10_000, &mut rng).unwrap();
    println!("improvement fraction at a random state: {p}");
    assert!(p > 0.0);
}

#[test]
fn trace_csv_layout() {
    let obj = snr(4, 1);
    let cfg = SearchConfig::new(obj, PerturbationModel::symmetric_uniform(4, D0).unwrap())
        .with_max_iterations(3)
        .with_stop(StopCriterion::BudgetOnly);
    let t = run_seeded(&cfg, 10).unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf, "abc123", 10).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# fingerprint=abc123 seed=10");
    assert_eq!(lines[1], "iter,f_value,accepted");
    assert_eq!(lines.len(), 2 + 4);
    for (i, line) in lines[2..].iter().enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], i.to_string());
        assert_eq!(cols[1].parse::<f64>().unwrap().to_bits(), t.values[i].to_bits());
        assert_eq!(cols[2], if t.accepted[i] { "1" } else { "0" });
    }
}
