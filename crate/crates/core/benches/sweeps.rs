//! Benchmarks of the exhaustive verification sweeps, comparing the
//! data-parallel execution path against the sequential fallback on the same
//! inputs. Build with `--no-default-features` to measure a binary without
//! rayon linked at all (both modes then run sequentially).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use loopext::exec::ExecMode;
use loopext::extension::{cocycle_verify, Cocycle};
use loopext::lie::{build_split_simple, Series};
use loopext::window::Window;

fn bench_structure_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_algebra");
    for (series, rank) in [(Series::C, 3), (Series::D, 4)] {
        let table = build_split_simple(series, rank).unwrap();
        let name = table.name().to_string();
        group.bench_with_input(BenchmarkId::new("parallel", &name), &table, |b, t| {
            b.iter(|| {
                let report = t.verify(ExecMode::Parallel);
                assert!(report.passed());
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", &name), &table, |b, t| {
            b.iter(|| {
                let report = t.verify(ExecMode::Sequential);
                assert!(report.passed());
            })
        });
    }
    group.finish();
}

fn bench_cocycle_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("cocycle_verify");
    group.sample_size(10);
    let table = build_split_simple(Series::A, 2).unwrap();
    let cocycle = Cocycle::kassel(2);
    let window = Window::new(2, 1);
    group.bench_function(BenchmarkId::new("parallel", "A2-n2-D1"), |b| {
        b.iter(|| {
            let report = cocycle_verify(&table, &cocycle, &window, ExecMode::Parallel).unwrap();
            assert!(report.passed());
        })
    });
    group.bench_function(BenchmarkId::new("sequential", "A2-n2-D1"), |b| {
        b.iter(|| {
            let report = cocycle_verify(&table, &cocycle, &window, ExecMode::Sequential).unwrap();
            assert!(report.passed());
        })
    });
    group.finish();
}

criterion_group!(benches, bench_structure_verification, bench_cocycle_sweep);
criterion_main!(benches);
