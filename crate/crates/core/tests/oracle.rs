use anova_core::{
    ks_two_sample, mean_image_check, simulate_statistic, simulate_statistics, Layout, SimPlan, State, TestKind,
};

const REPS: usize = 100_000;

fn mean_plan(sigma: f64, seed: u64) -> SimPlan {
    let layout = Layout::single(5).unwrap();
    let state = State::new(vec![0.0], sigma, &layout).unwrap();
    SimPlan::new(state, layout, TestKind::MeanEqualsMu0, REPS, seed).with_mu0(0.0)
}

#[test]
fn mean_test_null_rate() {
    let sim = simulate_statistic(&mean_plan(1.0, 42)).unwrap();
    assert!((sim.empirical_tail - 0.05).abs() <= 0.003, "{}", sim.empirical_tail);
    assert!((0.0..=1.0).contains(&sim.ks_distance));
}

#[test]
fn sigma_invariance() {
    let a = simulate_statistic(&mean_plan(1.0, 7)).unwrap();
    let b = simulate_statistic(&mean_plan(10.0, 7)).unwrap();
    assert!((a.empirical_tail - b.empirical_tail).abs() < 0.004);
}

#[test]
fn one_way_ks_to_f_2_12() {
    let layout = Layout::one_way(vec![4, 5, 6]).unwrap();
    let state = State::new(vec![-3.0; 3], 0.5, &layout).unwrap();
    let sim = simulate_statistic(&SimPlan::new(state, layout, TestKind::OneWayEqualMeans, REPS, 11)).unwrap();
    assert_eq!(sim.target_law.to_string(), "F(2, 12)");
    assert!(sim.ks_distance < 0.01, "{}", sim.ks_distance);
}

#[test]
fn determinism() {
    let a = simulate_statistic(&mean_plan(1.0, 3)).unwrap();
    let b = simulate_statistic(&mean_plan(1.0, 3)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn seed_spread_is_binomial() {
    let reps = 20_000;
    let sd = (0.05 * 0.95 / reps as f64).sqrt();
    for seed in 0..10 {
        let plan = SimPlan {
            replicates: reps,
            ..mean_plan(1.0, 1_000 + seed)
        };
        let tail = simulate_statistic(&plan).unwrap().empirical_tail;
        assert!((tail - 0.05).abs() <= 4.0 * sd, "seed {seed}: {tail}");
    }
}

#[test]
fn location_scale_null_invariance() {
    let layout = Layout::two_way(2, 3, 4).unwrap();
    let means = vec![1.0, 3.0, 0.0, 2.0, 4.0, 1.0];
    let moved: Vec<f64> = means.iter().map(|m| 50.0 + m * 3.0).collect();
    let base = State::new(means, 1.0, &layout).unwrap();
    let shifted = State::new(moved, 3.0, &layout).unwrap();
    let plan = |state, seed| SimPlan::new(state, layout.clone(), TestKind::TwoWayInteraction, REPS, seed);
    let a = simulate_statistics(&plan(base, 21)).unwrap();
    let b = simulate_statistics(&plan(shifted, 22)).unwrap();
    assert!(ks_two_sample(&a, &b) < 0.015);
}

#[test]
fn image_of_single_draw_is_the_model() {
    let check = mean_image_check(1, 2.0, 3.0, 5, REPS).unwrap();
    assert!(check.mean_law.ks_distance < 0.01);
    assert!(check.spread_law.is_none());
}

#[test]
fn image_mean_and_independence() {
    let (n, mu, sigma) = (10, 3.0, 2.0);
    let check = mean_image_check(n, mu, sigma, 8, REPS).unwrap();
    let bound = 3.0 * sigma / ((n * REPS) as f64).sqrt();
    assert!((check.mean_of_mu_bar - mu).abs() <= bound);
    assert!(check.correlation.unwrap().abs() < 0.01);

    let five = mean_image_check(5, 0.0, 1.0, 9, REPS).unwrap();
    let spread = five.spread_law.unwrap();
    assert_eq!(spread.target_law.to_string(), "chi2(4)");
    assert!(spread.ks_distance < 0.01);
}
