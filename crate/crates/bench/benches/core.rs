use std::hint::black_box;

use anova_core::{
    alpha_point, run_test, simulate_statistic, Dataset, DistributionModel, FDist, Layout, SimPlan, State, TestKind,
    TestSpec,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn quantiles(c: &mut Criterion) {
    let law = DistributionModel::F(FDist::new(3.0, 20.0).unwrap());
    c.bench_function("alpha_point F(3,20) 0.05", |b| {
        b.iter(|| alpha_point(black_box(&law), 0.05).unwrap())
    });
    let heavy = DistributionModel::F(FDist::new(1.0, 1.0).unwrap());
    c.bench_function("alpha_point F(1,1) 0.001", |b| {
        b.iter(|| alpha_point(black_box(&heavy), 0.001).unwrap())
    });
}

fn tests(c: &mut Criterion) {
    let cells: Vec<Vec<Vec<f64>>> = (0..4)
        .map(|i| {
            (0..5)
                .map(|j| (0..6).map(|k| (i * 31 + j * 7 + k * 13) as f64 % 11.0).collect())
                .collect()
        })
        .collect();
    let x = Dataset::two_way(&cells).unwrap();
    let spec = TestSpec::new(TestKind::TwoWayInteraction, 0.05, None).unwrap();
    c.bench_function("run_test interaction 4x5x6", |b| {
        b.iter(|| run_test(black_box(&spec), black_box(&x)).unwrap())
    });
}

fn simulation(c: &mut Criterion) {
    let layout = Layout::one_way(vec![4, 5, 6]).unwrap();
    let state = State::new(vec![0.0; 3], 1.0, &layout).unwrap();
    let plan = SimPlan::new(state, layout, TestKind::OneWayEqualMeans, 10_000, 1);
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    group.bench_function("one-way 10k replicates", |b| {
        b.iter(|| simulate_statistic(black_box(&plan)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, quantiles, tests, simulation);
criterion_main!(benches);
