use k3glue_core::cover_cech::atlas::build_cover;
use k3glue_core::cover_cech::ueda::ueda_trials;
use k3glue_core::cover_cech::{schwarz_pick_s, ueda_constants};
use k3glue_core::family_ks::{ks_cocycle_w, tangent_cohomology_dims, FamilyConfig, FamilyKind};
use k3glue_core::k3_lattice::{gram_matrix, picard_bound, Hyperplane, LATTICE_RANK};
use k3glue_core::linearizer::{schroder_solve, substitution_residual, synthetic_perturbation, BandAtlas, SolverOptions};
use k3glue_core::surgery::{check_transitions, global_function_dim, global_vector_field_basis, GluingDatum, KernelCaps};
use k3glue_core::torus_pic::diophantine_estimate;
use k3glue_core::{Error, FlatBundleClass, TorusShape};
use num_complex::Complex64;

fn golden_datum(r_prime: f64) -> GluingDatum {
    GluingDatum::new(&TorusShape::square(), 9, &FlatBundleClass::golden_mean(), 2.0, r_prime, Complex64::new(0.1, 0.05)).unwrap()
}

#[test]
fn golden_class_passes_every_stage() {
    let class = FlatBundleClass::golden_mean();
    let shape = TorusShape::square();
    assert!(diophantine_estimate(&class, 10_000, 1.2).unwrap().passes);

    let atlas = BandAtlas::new(&shape, 3).unwrap();
    let input = synthetic_perturbation(&class, &atlas, 3, 0.1, 7);
    let sol = schroder_solve(&input, &atlas, 8, SolverOptions::default()).unwrap();
    assert!(substitution_residual(&sol, &input, &atlas, 4).iter().all(|r| *r < 1e-10));

    let datum = golden_datum(2.0);
    assert!(check_transitions(&datum).all_hold);
    let caps = KernelCaps { mode_cap: 8, laurent_cap: 8, distance_floor: 1e-9 };
    assert_eq!(global_function_dim(&datum, caps).unwrap(), 1);
    assert_eq!(global_vector_field_basis(&datum, caps).unwrap().kernel.dimension, 2);
}

#[test]
fn torsion_class_is_rejected_downstream() {
    let class = FlatBundleClass::rational((1, 3), (0, 1));
    assert_eq!(diophantine_estimate(&class, 100, 1.2).unwrap_err(), Error::TorsionClass { n: 3 });
    let datum = GluingDatum::new(&TorusShape::square(), 9, &class, 2.0, 2.0, Complex64::new(0.1, 0.05)).unwrap();
    assert_eq!(global_function_dim(&datum, KernelCaps::default()), Err(Error::TorsionClass { n: 3 }));
}

#[test]
fn ueda_trials_hold_on_disk_cover() {
    let shape = TorusShape::square();
    let records = ueda_trials(&shape, 5, 20, 4, 11).unwrap();
    assert_eq!(records.len(), 20);
    assert!(records.iter().all(|r| r.slack > 0.0));
    let atlas = build_cover(&shape, 5).unwrap();
    let c = ueda_constants(schwarz_pick_s(atlas.ratio()).unwrap(), 5).unwrap();
    assert!(c.bound_holds());
}

#[test]
fn family_over_glued_surface() {
    let cfg = FamilyConfig::at_base(FamilyKind::AnnulusW, golden_datum(3.0));
    let rep = ks_cocycle_w(&cfg, Complex64::new(2.0, 0.3), Complex64::new(0.1, 0.2), Complex64::new(1.5, 0.0), &[1e-3, 5e-4]).unwrap();
    assert!(rep.holds);
    assert!(rep.observed_order.unwrap() > 1.9);
    let t = tangent_cohomology_dims(9).unwrap();
    assert_eq!((t.h0, t.h1, t.h2), (0, 10, 0));
}

#[test]
fn lattice_and_picard_bound_agree() {
    let form = gram_matrix();
    let mut v = vec![0i64; LATTICE_RANK];
    v[0] = 1;
    let h = Hyperplane::from_integers(&[v]).unwrap();
    let r = form.hyperplane_rank(&h);
    assert_eq!(r, 21);
    let w = form.f_n_witness(&h, r).unwrap();
    assert_eq!(w.stratum_dimension, 0);
    let b = picard_bound(18).unwrap();
    assert_eq!(b.rho_bound, 2);
    assert!(b.non_kummer_possible);
}
