use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qck_core::par::Execution;
use qck_core::suite::{run_suite, Bounds, SuiteConfig, SuiteKind};

fn workloads() -> Vec<(&'static str, SuiteConfig)> {
    let with = |suite, bounds| SuiteConfig { bounds, ..SuiteConfig::new(suite) };
    vec![
        ("clausen-n5", with(SuiteKind::Clausen, Bounds { nmax: Some(5), ..Bounds::default() })),
        ("lemmas-n5", with(SuiteKind::Lemmas, Bounds { nmax: Some(5), ..Bounds::default() })),
        (
            "congruence-p7",
            with(SuiteKind::Congruence, Bounds { primes: Some(vec![7]), nmax: Some(4), ..Bounds::default() }),
        ),
        ("positivity-n5", with(SuiteKind::Positivity, Bounds { nmax: Some(5), ..Bounds::default() })),
    ]
}

fn execution_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, config) in workloads() {
        for (mode, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            let config = SuiteConfig { execution: exec, ..config.clone() };
            group.bench_with_input(BenchmarkId::new(mode, name), &config, |b, cfg| {
                b.iter(|| {
                    let reports = run_suite(black_box(cfg)).unwrap();
                    assert!(reports.iter().all(|r| r.passed));
                    reports.len()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, execution_modes);
criterion_main!(benches);
