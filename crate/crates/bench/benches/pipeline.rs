use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ifs_spectra_bench::planar;
use ifs_spectra_core::dynamics::{build_catalog, extreme_cycles};
use ifs_spectra_core::spectrum::{assemble_spectrum, Horizon};
use ifs_spectra_core::verify::{default_test_points, orthogonality_check, parseval_sweep, simulate_paths};
use ifs_spectra_core::{presets, validate_hadamard};

fn structure(c: &mut Criterion) {
    let t = presets::planar_example();
    c.bench_function("validate_hadamard", |b| b.iter(|| validate_hadamard(t.r(), t.b(), t.l()).unwrap()));
    c.bench_function("extreme_cycles", |b| b.iter(|| extreme_cycles(black_box(&t)).unwrap()));
    c.bench_function("build_catalog", |b| b.iter(|| build_catalog(black_box(&t)).unwrap()));
}

fn spectra(c: &mut Criterion) {
    let f = planar();
    let mut g = c.benchmark_group("assemble_spectrum");
    for r in [256i64, 1024, 4096] {
        g.bench_with_input(BenchmarkId::new("radius", r), &r, |b, &r| {
            b.iter(|| assemble_spectrum(&f.triple, &f.catalog, Horizon::Radius(r)).unwrap())
        });
    }
    g.finish();
}

fn checks(c: &mut Criterion) {
    let f = planar();
    let mut g = c.benchmark_group("checks");
    g.sample_size(10);
    let words = assemble_spectrum(&f.triple, &f.catalog, Horizon::Words(3)).unwrap().values();
    g.bench_function("orthogonality_h3", |b| b.iter(|| orthogonality_check(&words, &f.evaluator)));
    let sp = assemble_spectrum(&f.triple, &f.catalog, Horizon::Radius(1024)).unwrap();
    let pts = default_test_points(2, 3, 0, 1);
    g.bench_function("parseval_r1024_9pts", |b| b.iter(|| parseval_sweep(&sp, &f.evaluator, &pts, &[1024])));
    g.bench_function("mu_hat", |b| b.iter(|| f.evaluator.mu_hat(black_box(&[123.25, -77.5]))));
    g.bench_function("simulate_4096_paths", |b| b.iter(|| simulate_paths(&f.triple, &f.catalog, &[0.5, 0.25], 4096, 64, 7)));
    g.finish();
}

criterion_group!(benches, structure, spectra, checks);
criterion_main!(benches);
