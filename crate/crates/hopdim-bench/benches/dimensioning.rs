use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hopdim::rng::SplitMix64;
use hopdim::{
    analytic, estimate_failure, numerics, pattern, GridSpec, ResourceGrid, SampleMode,
    ScenarioConfig, SimJob,
};

fn bench_analytic(c: &mut Criterion) {
    let mut group = c.benchmark_group("analytic");
    group.bench_function("failure_prob_no_resolution", |b| {
        b.iter(|| analytic::failure_prob_no_resolution(black_box(20), 100, 2886).unwrap())
    });
    group.bench_function("failure_prob_resolvable_nc3", |b| {
        b.iter(|| analytic::failure_prob_resolvable(black_box(5), 100, 336, 3).unwrap())
    });
    group.bench_function("required_ru_no_resolution", |b| {
        b.iter(|| analytic::required_ru_no_resolution(black_box(20), 100, 1e-6).unwrap())
    });
    group.bench_function("required_ru_single_resolution", |b| {
        b.iter(|| analytic::required_ru_single_resolution(black_box(10), 100, 1e-6).unwrap())
    });
    group.finish();
}

fn bench_numerics(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerics");
    group.bench_function("lambert_wm1", |b| {
        b.iter(|| numerics::lambert_wm1(black_box(-0.27547)).unwrap())
    });
    group.bench_function("invert_required_ru_nc2", |b| {
        b.iter(|| numerics::invert_required_ru_numeric(black_box(6), 100, 1e-6, 2).unwrap())
    });
    group.bench_function("optimal_reps_numeric_nc1", |b| {
        b.iter(|| numerics::optimal_reps_numeric(black_box(100), 1e-6, 1).unwrap())
    });
    group.finish();
}

fn bench_sampler(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampler");
    let grid = ResourceGrid::new(74, 39).unwrap();
    for mode in [SampleMode::Latin, SampleMode::Uniform] {
        group.bench_with_input(BenchmarkId::new("pattern_n20", mode), &mode, |b, &mode| {
            let mut rng = SplitMix64::new(1);
            let mut out = Vec::with_capacity(20);
            let mut scratch = Vec::with_capacity(20);
            b.iter(|| {
                pattern::sample_flat_into(&grid, 20, mode, &mut rng, &mut out, &mut scratch);
                black_box(out.last().copied())
            })
        });
    }
    group.finish();
}

fn bench_estimator(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimator");
    group.sample_size(10);
    // one frame = 1 target + 50 interferer patterns of 10 cells
    let scenario = ScenarioConfig::new(50, 10, 1e-3, 0).unwrap();
    for (mode, n_ru) in [(SampleMode::Uniform, 724u64), (SampleMode::Latin, 725)] {
        let job = SimJob::new(scenario, GridSpec::Auto { n_ru }, mode, 20_000, 42);
        group.bench_with_input(
            BenchmarkId::new("frames_20k_d50_n10", mode),
            &job,
            |b, job| b.iter(|| estimate_failure(black_box(job)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_analytic,
    bench_numerics,
    bench_sampler,
    bench_estimator
);
criterion_main!(benches);
