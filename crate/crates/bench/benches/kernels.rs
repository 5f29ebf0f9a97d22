use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use k3glue_core::cover_cech::ueda::ueda_trials;
use k3glue_core::family_ks::{fixed_locus, ProjAut};
use k3glue_core::k3_lattice::{gram_matrix, Hyperplane, LATTICE_RANK};
use k3glue_core::linearizer::{schroder_solve, synthetic_perturbation, BandAtlas, SolverOptions};
use k3glue_core::surgery::{global_vector_field_basis, GluingDatum, KernelCaps};
use k3glue_core::torus_pic::diophantine_estimate;
use k3glue_core::{FlatBundleClass, TorusShape};
use num_complex::Complex64;

fn dioph(c: &mut Criterion) {
    let class = FlatBundleClass::golden_mean();
    c.bench_function("diophantine golden 1e4", |b| b.iter(|| diophantine_estimate(black_box(&class), 10_000, 1.2).unwrap()));
}

fn ueda(c: &mut Criterion) {
    let shape = TorusShape::square();
    c.bench_function("ueda trials N=4 x20", |b| b.iter(|| ueda_trials(black_box(&shape), 4, 20, 4, 1).unwrap()));
}

fn schroder(c: &mut Criterion) {
    let class = FlatBundleClass::golden_mean();
    let atlas = BandAtlas::new(&TorusShape::square(), 3).unwrap();
    let input = synthetic_perturbation(&class, &atlas, 3, 0.1, 1);
    c.bench_function("schroder order 8", |b| b.iter(|| schroder_solve(black_box(&input), &atlas, 8, SolverOptions::default()).unwrap()));
}

fn kernels(c: &mut Criterion) {
    let datum = GluingDatum::new(&TorusShape::square(), 9, &FlatBundleClass::golden_mean(), 2.0, 2.0, Complex64::new(0.1, 0.05)).unwrap();
    let caps = KernelCaps { mode_cap: 8, laurent_cap: 8, distance_floor: 1e-9 };
    c.bench_function("vector field kernel cap 8", |b| b.iter(|| global_vector_field_basis(black_box(&datum), caps).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let form = gram_matrix();
    let spans: Vec<Vec<i64>> = (0..4).map(|i| (0..LATTICE_RANK as i64).map(|j| (i * 7 + j * 3) % 5 - 2).collect()).collect();
    let h = Hyperplane::from_integers(&spans).unwrap();
    c.bench_function("hyperplane rank k=4", |b| b.iter(|| form.hyperplane_rank(black_box(&h))));
}

fn fixed(c: &mut Criterion) {
    let aut = ProjAut::integer([[1, 0, 0], [0, 1, 0], [0, 0, 2]]).unwrap();
    c.bench_function("fixed locus", |b| b.iter(|| fixed_locus(black_box(&aut))));
}

criterion_group!(benches, dioph, ueda, schroder, kernels, lattice, fixed);
criterion_main!(benches);
