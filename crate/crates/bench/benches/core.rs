use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use gassmann_core::gassmann::{integral_search, is_gassmann, GassmannTriple};
use gassmann_core::homology::{homology_sweep, sweep_group};
use gassmann_core::lattice::{maximal_normal_sublattice, IntMat};
use gassmann_core::permgroup::catalog;
use gassmann_core::splitting::splitting_report;

fn groups(c: &mut Criterion) {
    c.bench_function("generate psl2(29)", |b| b.iter(|| catalog::psl2(black_box(29))));
    let g = catalog::psl2(29);
    c.bench_function("conjugacy classes psl2(29)", |b| b.iter(|| g.conjugacy_classes().len()));
}

fn gassmann(c: &mut Criterion) {
    let g = catalog::gl3_f2();
    let h1 = catalog::gl3_point_stabilizer(&g);
    let h2 = catalog::gl3_hyperplane_stabilizer(&g);
    c.bench_function("is_gassmann gl3", |b| b.iter(|| is_gassmann(&g, &h1, &h2).unwrap()));
    c.bench_function("splitting report gl3", |b| b.iter(|| splitting_report(&g, &h1, &h2).unwrap()));
    let triple = GassmannTriple::new(&g, h1.clone(), h2.clone()).unwrap();
    c.bench_function("integral search gl3 bound 3", |b| {
        b.iter(|| integral_search(&triple, black_box(3), 0, 0).is_err())
    });
}

fn lattice(c: &mut Criterion) {
    let m = IntMat::from_rows(&[
        vec![6i64, 1, 0, 2],
        vec![0, 10, 3, 1],
        vec![4, 0, 15, 7],
        vec![1, 2, 0, 9],
    ])
    .unwrap();
    c.bench_function("maximal normal sublattice 4x4", |b| {
        b.iter(|| maximal_normal_sublattice(black_box(&m)).unwrap())
    });
}

fn homology(c: &mut Criterion) {
    let s4 = catalog::symmetric(4);
    c.bench_function("sweep S4", |b| b.iter(|| sweep_group("S4", &s4, 24)));
    let mut slow = c.benchmark_group("sweep");
    slow.sample_size(10);
    slow.bench_function("corpus up to 120", |b| b.iter(|| homology_sweep(120, 60).passed));
    slow.finish();
}

criterion_group!(benches, groups, gassmann, lattice, homology);
criterion_main!(benches);
