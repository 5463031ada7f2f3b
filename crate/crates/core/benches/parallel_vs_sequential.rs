use abm_evi::asymptotics::covariance_mc_check;
use abm_evi::simulation::{lookup, run_experiment, Experiment};
use abm_evi::Parallelism;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn modes() -> [(&'static str, Parallelism); 2] {
    [
        ("sequential", Parallelism::Sequential),
        ("parallel", Parallelism::Threads(None)),
    ]
}

fn experiment(c: &mut Criterion) {
    let Experiment::MonteCarlo(mut config) = lookup("fig3a-student-t2").unwrap().experiment else {
        unreachable!()
    };
    config.reps = 32;
    let mut group = c.benchmark_group("run_experiment/fig3a-32reps");
    group.sample_size(10);
    for (name, par) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &par, |b, &par| {
            b.iter(|| run_experiment(black_box(&config), par).unwrap())
        });
    }
    group.finish();
}

fn covariance(c: &mut Criterion) {
    let mut group = c.benchmark_group("covariance_mc_check/200k");
    group.sample_size(10);
    for (name, par) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &par, |b, &par| {
            b.iter(|| covariance_mc_check(1.0, black_box(200_000), 1, par).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, experiment, covariance);
criterion_main!(benches);
