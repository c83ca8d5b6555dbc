//! Exhaustive advice census and batch bct0 solving under both executors.

use std::hint::black_box;
use std::path::Path;

use baire::closed_sets::NegClosedSet;
use baire::genericity::advice_census;
use baire::instance::{InstanceFile, Payload};
use baire::par::Executor;
use baire::random::{random_nowhere_dense, seeded_rng};
use baire::solvers::{bct0_solve, Bct0Instance};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const EXECUTORS: [(&str, Executor); 2] = [
    ("sequential", Executor::Sequential),
    ("parallel", Executor::Parallel),
];

fn census(c: &mut Criterion) {
    let path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances/fireworks/staircase.json");
    let Payload::OpenFamily(fam) = InstanceFile::load(&path).expect("shipped instance").payload
    else {
        panic!("staircase.json is an open family");
    };
    let mut group = c.benchmark_group("advice_census_k2_imax2");
    group.sample_size(10);
    for (name, exec) in EXECUTORS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(advice_census(&fam, 2, 2, 1 << 12, exec).expect("census runs")))
        });
    }
    group.finish();
}

fn batch_bct0(c: &mut Criterion) {
    let mut rng = seeded_rng(1);
    let instances: Vec<Bct0Instance> = (0..64)
        .map(|_| {
            Bct0Instance::new(
                (0..6)
                    .map(|_| NegClosedSet::from_spec(random_nowhere_dense(&mut rng, 3)))
                    .collect(),
            )
        })
        .collect();
    let mut group = c.benchmark_group("batch_bct0_64");
    for (name, exec) in EXECUTORS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                black_box(exec.map(instances.iter().collect(), |inst| bct0_solve(inst, 1 << 14)))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, census, batch_bct0);
criterion_main!(benches);
