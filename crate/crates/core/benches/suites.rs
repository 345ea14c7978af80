use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use morita_core::laws::{run_suite, LawConfig, Suite};
use morita_core::par::Execution;

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    let cases = [
        (Suite::EssentialEquivalence, 2000),
        (Suite::TensorAdjunction, 100),
        (Suite::Reconstruction, 50),
        (Suite::BibundleMorphisms, 200),
    ];
    for (suite, n) in cases {
        for execution in [Execution::Sequential, Execution::Parallel] {
            let config = LawConfig {
                cases: Some(n),
                execution,
                ..LawConfig::default()
            };
            let id = BenchmarkId::new(suite.name(), format!("{execution:?}").to_lowercase());
            group.bench_with_input(id, &config, |b, config| b.iter(|| black_box(run_suite(suite, config))));
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
