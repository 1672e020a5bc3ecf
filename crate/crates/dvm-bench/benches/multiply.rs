use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dvm_core::{build_plan, direct_multiply, dvm_multiply, sdvm_multiply, Node};

// A generic angle whose multiples stay clear of full turns for every size
// benchmarked here, so no plan hits the degenerate path.
const THETA: f64 = 0.37;

fn seeded_vector(n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn bench_plan_construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("plan_construction");
    group.sample_size(20);
    for n in [64usize, 256, 1024, 4096] {
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_plan::<f64>(n, Node::from_angle(THETA)).expect("plan"));
        });
    }
    group.finish();
}

fn bench_scaled_multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("scaled_multiply");
    for n in [64usize, 256, 1024, 4096] {
        let plan = build_plan::<f64>(n, Node::from_angle(THETA)).expect("plan");
        let z = seeded_vector(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| sdvm_multiply(&plan, &z).expect("multiply"));
        });
    }
    group.finish();
}

fn bench_delay_multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("delay_multiply");
    for n in [64usize, 256, 1024, 4096] {
        let plan = build_plan::<f64>(n, Node::from_angle(THETA)).expect("plan");
        let z = seeded_vector(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| dvm_multiply(&plan, &z).expect("multiply"));
        });
    }
    group.finish();
}

fn bench_direct_multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("direct_multiply");
    // Quadratic baseline; stop at 1024 and take fewer samples to keep the
    // run short.
    group.sample_size(10);
    for n in [64usize, 256, 1024] {
        let node = Node::from_angle(THETA);
        let z = seeded_vector(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| direct_multiply(n, node, &z, true).expect("multiply"));
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_plan_construction,
    bench_scaled_multiply,
    bench_delay_multiply,
    bench_direct_multiply
);
criterion_main!(benches);
