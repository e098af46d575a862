use criterion::{criterion_group, criterion_main, Criterion};
use kgraph_core::qdeform::hat_ops;
use kgraph_core::GradedOperator;

fn bench_operators(c: &mut Criterion) {
    let hat = hat_ops(10, 6).unwrap();
    let a = hat[&'A'].clone();
    let y = hat[&'Y'].clone();

    c.bench_function("graded_mul_n10", |b| {
        b.iter(|| std::hint::black_box(&y).mul(std::hint::black_box(&a)).unwrap())
    });
    c.bench_function("core_residual_n10", |b| {
        let id = GradedOperator::identity(a.params);
        let aa = a.adjoint().mul(&a).unwrap();
        b.iter(|| std::hint::black_box(&aa).core_residual(&id).unwrap())
    });
    c.bench_function("op_norm_core_n10", |b| {
        let yy = y.mul(&y.adjoint()).unwrap();
        b.iter(|| std::hint::black_box(&yy).op_norm_core())
    });
}

criterion_group!(benches, bench_operators);
criterion_main!(benches);
