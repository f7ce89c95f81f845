use criterion::{criterion_group, criterion_main, Criterion};
use ggk_core::homalg::FieldKind;
use ggk_core::verify::{run_criterion, Config, Execution};

fn execution_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for id in [5u8, 6, 9] {
        for (label, execution) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            let cfg = Config {
                seed: 7,
                field: FieldKind::Rational,
                execution,
            };
            group.bench_function(format!("criterion{id}/{label}"), |b| {
                b.iter(|| run_criterion(id, &cfg))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, execution_modes);
criterion_main!(benches);
