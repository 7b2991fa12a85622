use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use scgen::matrix::{
    find_forbidden_submatrix, generate_matrix, scan_forbidden, GenerationConfig, PatternSet,
};
use scgen::pipeline::{batch_configs, run_batch_seq};
use scgen::prune::prune;
use scgen::recognition::is_strongly_chordal;
use scgen::tree::{build_tree, is_compatible_family_seq, SubtreeFamily};

#[cfg(feature = "parallel")]
use scgen::pipeline::run_batch_par;
#[cfg(feature = "parallel")]
use scgen::tree::is_compatible_family_par;

fn bench_generate(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    group.sample_size(10);
    for n in [32usize, 64, 128] {
        group.bench_with_input(BenchmarkId::new("exhaustive", n), &n, |b, &n| {
            let cfg = GenerationConfig::new(n, n, 11);
            b.iter(|| generate_matrix(&cfg).unwrap());
        });
    }
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let cfg = GenerationConfig::new(48, 48, 5);
    let m = generate_matrix(&cfg).unwrap();
    let mut group = c.benchmark_group("scan_48x48");
    group.bench_function("brute_force", |b| b.iter(|| find_forbidden_submatrix(&m)));
    group.bench_function("word_parallel", |b| {
        b.iter(|| scan_forbidden(&m, PatternSet::Both))
    });
    group.finish();
}

fn family_of(n: usize, seed: u64) -> SubtreeFamily {
    let cfg = GenerationConfig {
        density: 0.7,
        ..GenerationConfig::new(n, n, seed)
    };
    let pruned = prune(&generate_matrix(&cfg).unwrap()).pruned;
    let tree = build_tree(&pruned).unwrap();
    SubtreeFamily::from_pruned(tree, &pruned)
}

fn bench_compatibility(c: &mut Criterion) {
    let family = family_of(192, 9);
    let mut group = c.benchmark_group("compatibility_192");
    group.bench_function("seq", |b| b.iter(|| is_compatible_family_seq(&family)));
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| b.iter(|| is_compatible_family_par(&family)));
    group.finish();
}

fn bench_batch(c: &mut Criterion) {
    let base = GenerationConfig::new(24, 24, 1);
    let configs = batch_configs(&base, 16);
    let mut group = c.benchmark_group("batch_16x_n24");
    group.sample_size(10);
    group.bench_function("seq", |b| b.iter(|| run_batch_seq(&configs).unwrap()));
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| b.iter(|| run_batch_par(&configs).unwrap()));
    group.finish();
}

fn bench_recognition(c: &mut Criterion) {
    let run = scgen::run_stages(&GenerationConfig {
        density: 0.7,
        ..GenerationConfig::new(96, 96, 2)
    })
    .unwrap();
    let g = run.graph;
    c.bench_function(
        &format!("recognize_v{}_e{}", g.vertex_count(), g.edges().len()),
        |b| b.iter(|| is_strongly_chordal(&g)),
    );
}

criterion_group!(
    benches,
    bench_generate,
    bench_scan,
    bench_compatibility,
    bench_batch,
    bench_recognition
);
criterion_main!(benches);
