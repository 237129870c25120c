use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bistable::builders;
use bistable::sweep::{classify_batch, random_systems, sector_census, stokes_trials, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn classify(c: &mut Criterion) {
    let systems = random_systems(2000, 40, 7);
    let mut group = c.benchmark_group("classify_batch");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, systems.len()), |b| {
            b.iter(|| classify_batch(black_box(&systems), exec))
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let x = builders::prism(14).unwrap().complex().clone();
    let mut group = c.benchmark_group("sector_census");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, x.n_faces()), |b| {
            b.iter(|| sector_census(black_box(&x), exec).unwrap())
        });
    }
    group.finish();
}

fn stokes(c: &mut Criterion) {
    let sys = builders::heptagonal_patch(1).unwrap();
    let regions: Vec<Vec<usize>> = (0..sys.complex().n_faces()).map(|f| vec![f]).collect();
    let mut group = c.benchmark_group("stokes_trials");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 500), |b| {
            b.iter(|| stokes_trials(black_box(&sys), &regions, 500, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, classify, census, stokes);
criterion_main!(benches);
