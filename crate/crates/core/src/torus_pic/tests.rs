use super::*;
use num_traits::Signed;
use proptest::prelude::*;

fn exact(c: &Coord) -> BigRational {
    match c {
        Coord::Exact(r) => r.clone(),
        Coord::Float(_) => panic!("expected exact"),
    }
}

#[test]
fn group_law_examples() {
    let x = FlatBundleClass::parse("0.3", "0.4").unwrap();
    let y = FlatBundleClass::parse("0.8", "0.9").unwrap();
    assert_eq!(class_add(&x, &y), FlatBundleClass::parse("0.1", "0.3").unwrap());
    assert_eq!(class_add(&FlatBundleClass::trivial(), &x), x);
    let u = FlatBundleClass::parse("0.25", "0.75").unwrap();
    let v = FlatBundleClass::parse("0.75", "0.25").unwrap();
    assert!(class_add(&u, &v).is_trivial());
    assert!(class_add(&x, &x.neg()).is_trivial());
}

#[test]
fn distance_examples() {
    let o = FlatBundleClass::trivial();
    assert_eq!(invariant_distance(&o, &o), 0.0);
    let d = invariant_distance_coord(&o, &FlatBundleClass::parse("0.3", "0.4").unwrap());
    assert_eq!(exact(&d), parse_q("7/10"));
    let d = invariant_distance_coord(&o, &FlatBundleClass::parse("0.9", "0.9").unwrap());
    assert_eq!(exact(&d), parse_q("1/5"));
}

fn parse_q(s: &str) -> BigRational {
    crate::exact::parse_rational(s).unwrap()
}

#[test]
fn two_torsion_vanishes() {
    let l = FlatBundleClass::rational((1, 2), (0, 1));
    let seq = power_distance_sequence(&l, 4).unwrap();
    assert_eq!(seq[1], (2, 0.0));
    assert_eq!(seq[0], (1, 0.5));
    assert!(power_distance_sequence(&l, 0).is_err());
}

#[test]
fn golden_mean_records_are_convergents() {
    let l = FlatBundleClass::golden_mean();
    let seq = power_distance_sequence(&l, 10_000).unwrap();
    let min_nd = seq.iter().map(|(n, d)| *n as f64 * d).fold(f64::INFINITY, f64::min);
    assert!(min_nd >= 0.27, "min n·d_n = {}", min_nd);
    let rep = diophantine_estimate(&l, 10_000, 2.0).unwrap();
    let conv = convergent_denominators(&exact(&l.a), 10_000);
    assert_eq!(rep.record_n, conv);
    assert!(rep.passes);
    assert!(rep.fitted_exponent <= 1.2, "{}", rep.fitted_exponent);
    assert!(rep.fitted_exponent >= 0.9);
}

#[test]
fn truncated_liouville_dip_structure() {
    let l = FlatBundleClass::truncated_liouville();
    // Below 10^6 the truncation behaves like 11/100 + 10^-6: no polynomial dip beats n^-3.
    let seq = power_distance_sequence(&l, 1_000_000).unwrap();
    let d_million = seq[999_999].1;
    assert!((d_million - 1e-18).abs() < 1e-30);
    assert!(seq[1..10_000].iter().all(|(n, d)| *d > (*n as f64).powi(-10)));
    let conv = convergent_denominators(&exact(&l.a), 1_000_000);
    let rep = diophantine_estimate(&l, 1_000_000, 3.0).unwrap();
    assert_eq!(rep.record_n, conv);
    assert!(!rep.passes, "exponent {}", rep.fitted_exponent);
    let at_dip = (-d_million.ln() - rep.fitted_offset) / 1e6f64.ln();
    assert!(at_dip > 3.0, "{}", at_dip);
    let short = diophantine_estimate(&l, 10_000, 3.0).unwrap();
    assert!(short.fitted_exponent < 1.5);
}

#[test]
fn torsion_class_rejected() {
    let l = FlatBundleClass::rational((1, 2), (0, 1));
    assert_eq!(diophantine_estimate(&l, 100, 2.0), Err(Error::TorsionClass { n: 2 }));
    assert!(diophantine_estimate(&FlatBundleClass::golden_mean(), 15, 2.0).is_err());
}

#[test]
fn ninth_point_examples() {
    let c = FlatBundleClass::parse("0.9", "0.1").unwrap();
    let ell0 = FlatBundleClass::parse("0.2", "0.3").unwrap();
    let q: [FlatBundleClass; 8] = std::array::from_fn(|_| FlatBundleClass::parse("0.05", "0.05").unwrap());
    let q9 = ninth_point(&c, &ell0, &q);
    assert_eq!(q9, FlatBundleClass::parse("0.3", "0.4").unwrap());
    let sum = q.iter().fold(FlatBundleClass::trivial(), |a, x| class_add(&a, x));
    assert_eq!(class_add(&class_add(&sum, &q9), &ell0), c);
    let zeros: [FlatBundleClass; 8] = std::array::from_fn(|_| FlatBundleClass::trivial());
    assert_eq!(ninth_point(&c, &FlatBundleClass::trivial(), &zeros), c);
}

fn rational_class() -> impl Strategy<Value = FlatBundleClass> {
    (0i64..997, 1i64..997, 0i64..997, 1i64..997)
        .prop_map(|(p, q, r, s)| FlatBundleClass::rational((p, q), (r, s)))
}

fn dist_q(x: &FlatBundleClass, y: &FlatBundleClass) -> BigRational {
    exact(&invariant_distance_coord(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distance_is_a_metric(x in rational_class(), y in rational_class(), z in rational_class()) {
        let dxy = dist_q(&x, &y);
        prop_assert!(!dxy.is_negative());
        prop_assert_eq!(&dxy, &dist_q(&y, &x));
        prop_assert!(dist_q(&x, &z) <= &dxy + dist_q(&y, &z));
        prop_assert_eq!(dxy.is_zero(), x == y);
    }

    #[test]
    fn distance_is_translation_invariant(x in rational_class(), y in rational_class(), g in rational_class()) {
        prop_assert_eq!(dist_q(&class_add(&x, &g), &class_add(&y, &g)), dist_q(&x, &y));
    }

    #[test]
    fn power_distance_is_subadditive(l in rational_class(), m in 1i64..200, n in 1i64..200) {
        let o = FlatBundleClass::trivial();
        let lhs = dist_q(&o, &l.pow(m + n));
        prop_assert!(lhs <= dist_q(&o, &l.pow(m)) + dist_q(&o, &l.pow(n)));
    }

    #[test]
    fn power_sequence_zero_iff_torsion(l in rational_class(), n_max in 1u64..300) {
        let seq = power_distance_sequence(&l, n_max).unwrap();
        for (n, d) in seq {
            let t = l.pow(n as i64).is_trivial();
            prop_assert_eq!(d == 0.0, t);
        }
    }

    #[test]
    fn ninth_point_is_unique_solution(c in rational_class(), ell0 in rational_class(),
                                      qs in proptest::collection::vec(rational_class(), 8),
                                      other in rational_class()) {
        let q: [FlatBundleClass; 8] = std::array::from_fn(|i| qs[i].clone());
        let q9 = ninth_point(&c, &ell0, &q);
        let sum = q.iter().fold(FlatBundleClass::trivial(), |a, x| class_add(&a, x));
        prop_assert_eq!(class_sub(&class_sub(&c, &sum), &q9), ell0.clone());
        if other != q9 {
            prop_assert_ne!(class_sub(&class_sub(&c, &sum), &other), ell0);
        }
    }

    #[test]
    fn report_bound_holds_on_samples(num in 1i64..1000, den in 1001i64..100_000) {
        let l = FlatBundleClass::float(num as f64 / den as f64 + std::f64::consts::SQRT_2 * 1e-7, 0.0);
        if let Ok(rep) = diophantine_estimate(&l, 200, 10.0) {
            for (n, d) in rep.samples.iter().filter(|(n, _)| *n >= 2) {
                let rhs = rep.fitted_exponent * (*n as f64).ln() + rep.fitted_offset;
                prop_assert!(-d.ln() <= rhs + 1e-9 * rhs.abs().max(1.0));
            }
        }
    }
}
