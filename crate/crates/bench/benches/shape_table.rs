use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyadic::ShapeTable;

fn bench_shape_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("shape_table");
    for (a_max, b_max) in [(9u64, 10u64), (20, 30), (50, 60)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{a_max}x{b_max}")),
            &(a_max, b_max),
            |bencher, &(a_max, b_max)| bencher.iter(|| ShapeTable::compute(a_max, b_max)),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_shape_table);
criterion_main!(benches);
