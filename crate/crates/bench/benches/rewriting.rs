use criterion::{criterion_group, criterion_main, Criterion};
use kgraph_core::{check_confluence, enumerate_paths, su3, DegreeVector, Path};

fn bench_rewriting(c: &mut Criterion) {
    let g = su3::build().unwrap();
    let degree = DegreeVector(vec![3, 3]);
    let paths = enumerate_paths(&g, 1, 6, &degree).unwrap();
    let longest = paths
        .iter()
        .max_by_key(|p| p.edges.len())
        .cloned()
        .unwrap_or_else(|| Path { source: 1, edges: vec![] });

    c.bench_function("normal_form_degree_3_3", |b| {
        b.iter(|| std::hint::black_box(&longest).normal_form(&g).unwrap())
    });
    c.bench_function("enumerate_paths_degree_3_3", |b| {
        b.iter(|| enumerate_paths(std::hint::black_box(&g), 1, 6, &degree).unwrap())
    });
    c.bench_function("confluence_degree_3_3", |b| {
        b.iter(|| check_confluence(&g, std::hint::black_box(&longest)).unwrap())
    });
}

criterion_group!(benches, bench_rewriting);
criterion_main!(benches);
