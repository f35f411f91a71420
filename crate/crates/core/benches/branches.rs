use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mqsolve::par::Workers;
use mqsolve::poly::random_system;
use mqsolve::solver::{boolean_solve, Method, SolveConfig};

fn branches(c: &mut Criterion) {
    let mut group = c.benchmark_group("boolean_solve");
    group.sample_size(10);
    for n in [14usize, 16] {
        let s = random_system(n, n, 7).expect("system");
        for method in [Method::Dense, Method::LasVegas] {
            for (label, workers) in [
                ("sequential", Workers::Sequential),
                ("threaded", Workers::Auto),
            ] {
                let cfg = SolveConfig {
                    method,
                    workers,
                    ..SolveConfig::default()
                };
                group.bench_with_input(
                    BenchmarkId::new(format!("{method:?}/{label}"), n),
                    &s,
                    |b, s| b.iter(|| boolean_solve(s, &cfg).expect("solve")),
                );
            }
        }
    }
    group.finish();
}

criterion_group!(benches, branches);
criterion_main!(benches);
