use criterion::{black_box, criterion_group, criterion_main, Criterion};
use semicert_core::{assemble_global, certify, chaos_game, enumerate, fixtures, tol, uniform_hyperbolicity};

fn certificates(c: &mut Criterion) {
    let long = fixtures::five_axes(41.0);
    let short = fixtures::five_axes(0.1);
    c.bench_function("certify/interval_system", |b| b.iter(|| certify(black_box(&long)).unwrap()));
    c.bench_function("certify/elliptic_word", |b| b.iter(|| certify(black_box(&short)).unwrap()));
    c.bench_function("assemble_global", |b| b.iter(|| assemble_global(black_box(&long)).unwrap()));
    let mats = [[2.0, 1.0, 1.0, 1.0], [1.0, 1.0, 1.0, 2.0]];
    c.bench_function("uniform_hyperbolicity", |b| b.iter(|| uniform_hyperbolicity(black_box(&mats)).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let fs = fixtures::five_axes(41.0);
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("enumerate_len6", |b| b.iter(|| enumerate(black_box(&fs), 6, tol::DEDUP_TOL).unwrap()));
    g.bench_function("chaos_game_10k", |b| b.iter(|| chaos_game(black_box(&fs), 10_000, 0)));
    g.finish();
}

criterion_group!(benches, certificates, oracle);
criterion_main!(benches);
