use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit(i: usize) -> Vec<i64> {
    (0..LATTICE_RANK).map(|k| i64::from(k == i)).collect()
}

fn random_vectors(rng: &mut ChaCha8Rng, k: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..k).map(|_| (0..LATTICE_RANK).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

/// Rank over ℚ of a list of integer rows.
fn q_rank(vs: &[Vec<i64>]) -> usize {
    rank(&vs.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
}

#[test]
fn gram_invariants() {
    let inv = gram_matrix().invariants();
    assert!(inv.symmetric && inv.even);
    assert_eq!(inv.determinant.abs(), 1);
    assert_eq!(inv.signature, Signature { positive: 3, negative: 19, zero: 0 });
    assert!(inv.all_hold());
}

#[test]
fn e8_block_is_unimodular_and_definite() {
    let z: ZMatrix = E8_CARTAN.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    assert_eq!(det_int(&z), BigInt::from(1));
    assert_eq!(signature(&to_q(&z)), Signature { positive: 8, negative: 0, zero: 0 });
}

#[test]
fn signature_of_small_forms() {
    let z = |rows: &[&[i64]]| -> QMatrix { rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect() };
    assert_eq!(signature(&z(&[&[0, 1], &[1, 0]])), Signature { positive: 1, negative: 1, zero: 0 });
    assert_eq!(signature(&z(&[&[1, 1], &[1, 1]])), Signature { positive: 1, negative: 0, zero: 1 });
    assert_eq!(signature(&z(&[&[0, 0], &[0, 0]])), Signature { positive: 0, negative: 0, zero: 2 });
    assert_eq!(signature(&z(&[&[0, 1, 0], &[1, 0, 2], &[0, 2, 0]])), Signature { positive: 1, negative: 1, zero: 1 });
}

#[test]
fn random_vectors_have_even_square() {
    let form = gram_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for x in random_vectors(&mut rng, 1000, 50) {
        assert_eq!(form.pair(&x, &x) % 2, 0);
    }
}

#[test]
fn rank_examples() {
    let form = gram_matrix();
    let one = Hyperplane::from_integers(&[unit(0)]).unwrap();
    assert_eq!(form.hyperplane_rank(&one), 21);
    let two = Hyperplane::new(vec![
        (0..LATTICE_RANK).map(|i| q(i as i64 + 1)).collect(),
        (0..LATTICE_RANK).map(|i| BigRational::new(BigInt::from(1), BigInt::from(i as i64 + 2))).collect(),
    ])
    .unwrap();
    assert_eq!(form.hyperplane_rank(&two), 20);
    let all = Hyperplane::from_integers(&(0..LATTICE_RANK).map(unit).collect::<Vec<_>>()).unwrap();
    assert_eq!(form.hyperplane_rank(&all), 0);
}

#[test]
fn hyperplane_validation() {
    assert!(Hyperplane::from_integers(&[]).is_err());
    assert!(Hyperplane::from_integers(&[unit(0), unit(0)]).is_err());
    assert!(Hyperplane::from_integers(&[vec![1, 2]]).is_err());
    let h = Hyperplane::parse(&[(0..LATTICE_RANK).map(|i| format!("{}/3", i + 1)).collect()]).unwrap();
    assert_eq!(h.span_vectors[0][2], BigRational::new(BigInt::from(1), BigInt::from(1)));
    assert!(Hyperplane::parse(&[vec!["x".to_string(); LATTICE_RANK]]).is_err());
}

#[test]
fn full_witness_for_rational_hyperplane() {
    let form = gram_matrix();
    let v = Hyperplane::from_integers(&[(0..LATTICE_RANK as i64).map(|i| i * i - 3).collect()]).unwrap();
    let w = form.f_n_witness(&v, 21).unwrap();
    assert_eq!(w.stratum_dimension, 0);
    assert_eq!(w.basis.len(), 21);
    assert!(w.reconstruction);
    assert_eq!(form.f_n_witness(&v, 22).unwrap_err(), Error::RankTooSmall { rank: 21, requested: 22 });
}

#[test]
fn single_vector_witness_in_two_vector_hyperplane() {
    let form = gram_matrix();
    let v = Hyperplane::from_integers(&[unit(3), (0..LATTICE_RANK as i64).map(|i| 2 * i + 1).collect()]).unwrap();
    let w = form.f_n_witness(&v, 1).unwrap();
    assert!(w.contained && w.reconstruction);
    assert_eq!((w.rank_of_m, w.stratum_dimension, w.hyperplane_rank), (1, 20, 20));
    // independent check against the Gram matrix
    let m: Vec<i64> = w.basis[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
    for vk in [unit(3), (0..LATTICE_RANK as i64).map(|i| 2 * i + 1).collect()] {
        assert_eq!(form.pair(&vk, &m), 0);
    }
}

#[test]
fn picard_examples() {
    let b = picard_bound(18).unwrap();
    assert_eq!(b.rho_bound, 2);
    assert!(b.non_kummer_possible);
    assert_eq!(picard_bound(0).unwrap().rho_bound, 20);
    assert!(!picard_bound(0).unwrap().non_kummer_possible);
    assert!(picard_bound(5).unwrap().non_kummer_possible);
    assert!(!picard_bound(4).unwrap().non_kummer_possible);
    assert!(matches!(picard_bound(21), Err(Error::Range(_))));
    assert!(matches!(picard_bound(-1), Err(Error::Range(_))));
}

#[test]
fn rank_agrees_with_rational_oracle() {
    let form = gram_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=LATTICE_RANK);
        let vs = random_vectors(&mut rng, k, 3);
        let Ok(v) = Hyperplane::from_integers(&vs) else { continue };
        let r = form.hyperplane_rank(&v);
        assert_eq!(r, LATTICE_RANK - q_rank(&vs));
        // the kernel is saturated: its basis spans a primitive sublattice
        let ker = form.lattice_in_hyperplane(&v);
        assert_eq!(rank(&to_q(&ker)), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_22_minus_k(seed in any::<u64>(), k in 1usize..=LATTICE_RANK) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = random_vectors(&mut rng, k, 4);
        prop_assume!(q_rank(&vs) == k);
        let v = Hyperplane::from_integers(&vs).unwrap();
        prop_assert_eq!(gram_matrix().hyperplane_rank(&v), LATTICE_RANK - k);
    }

    #[test]
    fn witness_is_contained(seed in any::<u64>(), k in 1usize..6, n in 1usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = random_vectors(&mut rng, k, 4);
        prop_assume!(q_rank(&vs) == k);
        let form = gram_matrix();
        let v = Hyperplane::from_integers(&vs).unwrap();
        let w = form.f_n_witness(&v, n).unwrap();
        prop_assert!(w.reconstruction);
        prop_assert_eq!(w.rank_of_m, n);
        for m in &w.basis {
            for vk in &vs {
                let p: BigInt = (0..LATTICE_RANK)
                    .flat_map(|i| (0..LATTICE_RANK).map(move |j| (i, j)))
                    .map(|(i, j)| BigInt::from(vk[i] * form.gram[i][j]) * &m[j])
                    .sum();
                prop_assert!(p.is_zero());
            }
        }
    }
}
