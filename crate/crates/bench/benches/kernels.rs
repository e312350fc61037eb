use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use curvelab_core::certify::{hierarchy_check, sec_extremes, thorpe_sec_min};
use curvelab_core::knalgebra::{g_power_iterated, KNAlgebra};
use curvelab_core::littlewood::{tensor_product, Partition};
use curvelab_core::weitzenbock::curvature_term;
use curvelab_core::{decompose, CurvatureOperator, RepSpace};

fn operator(n: usize) -> CurvatureOperator {
    CurvatureOperator::random(&mut ChaCha8Rng::seed_from_u64(1), n)
}

fn kterm(c: &mut Criterion) {
    let mut group = c.benchmark_group("curvature_term");
    for (n, p) in [(4, 2), (4, 4), (5, 3), (6, 4)] {
        let r = operator(n);
        let wedge = RepSpace::exterior(n, p.min(n)).unwrap();
        let sym0 = RepSpace::traceless(n, p).unwrap();
        group.bench_with_input(BenchmarkId::new("wedge", format!("n{n}p{p}")), &r, |b, r| {
            b.iter(|| curvature_term(r, &wedge).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sym0", format!("n{n}p{p}")), &r, |b, r| {
            b.iter(|| curvature_term(r, &sym0).unwrap())
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for n in [4, 6, 8] {
        let r = operator(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| decompose(r).unwrap())
        });
    }
    group.finish();
}

fn certification(c: &mut Criterion) {
    let r = operator(4);
    c.bench_function("thorpe_sec_min", |b| b.iter(|| thorpe_sec_min(&r).unwrap()));
    c.bench_function("sec_extremes/10_restarts", |b| {
        b.iter(|| sec_extremes(&r, 10, 7).unwrap())
    });
    let mut group = c.benchmark_group("hierarchy_check");
    group.sample_size(10);
    group.bench_function("n5p4", |b| {
        let r = operator(5);
        b.iter(|| hierarchy_check(&r, -100.0, 4).unwrap())
    });
    group.finish();
}

fn algebra(c: &mut Criterion) {
    c.bench_function("g_power/sym0_n5p4", |b| {
        b.iter(|| g_power_iterated(KNAlgebra::SymmetricTraceless, 5, 4).unwrap())
    });
    let lambda = Partition::new(vec![4, 2, 1]).unwrap();
    let mu = Partition::new(vec![3, 2]).unwrap();
    c.bench_function("lr/tensor_421x32", |b| b.iter(|| tensor_product(&lambda, &mu)));
}

criterion_group!(benches, kterm, decomposition, certification, algebra);
criterion_main!(benches);
