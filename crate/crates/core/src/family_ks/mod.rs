//! Deformation families of the glued surface: Kodaira–Spencer cocycles and the fixed-locus argument.

pub mod projective;
pub mod separation;

pub use projective::{
    cubic_fixed_points, fixed_locus, line_cubic_intersection, relative_discriminant, CubicFixedPoints, Point, ProjAut, ProjSubspace,
    TernaryForm,
};
pub use separation::{separation_scheme, SeparationReport, MAX_CUBIC_AUTOMORPHISMS};

use itertools::Itertools;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, QMatrix};
use crate::surgery::{check_transitions, Dual, GluingDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    AnnulusW,
    TranslationZ,
    Points,
    Combined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    /// Fibre parameter in 1 < |t₁| < R'.
    pub t1: Complex64,
    /// Translation parameter in |t₂| < 1.
    pub t2: Complex64,
    /// Torus displacements of the moved blow-up points.
    pub point_motions: Vec<Complex64>,
    pub base: GluingDatum,
}

impl FamilyConfig {
    /// A config at the base point: t₁ = R' makes the fibre map w ↦ 1/w, t₂ = 0.
    pub fn at_base(kind: FamilyKind, base: GluingDatum) -> Self {
        let motions = match kind {
            FamilyKind::Points => 8,
            FamilyKind::Combined => 16,
            _ => 0,
        };
        FamilyConfig { kind, t1: Complex64::new(base.r_prime, 0.0), t2: Complex64::zero(), point_motions: vec![Complex64::zero(); motions], base }
    }

    pub fn uses_t1(&self) -> bool {
        matches!(self.kind, FamilyKind::AnnulusW | FamilyKind::Combined)
    }

    pub fn uses_t2(&self) -> bool {
        matches!(self.kind, FamilyKind::TranslationZ | FamilyKind::Combined)
    }

    pub fn in_annulus(&self, t: Complex64) -> bool {
        1.0 < t.norm() && t.norm() < self.base.r_prime
    }

    pub fn validate(&self) -> Result<()> {
        // the base value t₁ = R' sits on the closed boundary, where the map reduces to w ↦ 1/w
        if self.uses_t1() && !(self.in_annulus(self.t1) || self.t1 == Complex64::new(self.base.r_prime, 0.0)) {
            return Err(Error::Domain(format!("t1 = {} outside 1 < |t| < {}", self.t1, self.base.r_prime)));
        }
        if self.uses_t2() && self.t2.norm() >= 1.0 {
            return Err(Error::Domain(format!("t2 = {} outside the unit disk", self.t2)));
        }
        let max_motions = match self.kind {
            FamilyKind::Points => 8,
            FamilyKind::Combined => 16,
            _ => 0,
        };
        if self.point_motions.len() > max_motions {
            return Err(Error::InvalidInput(format!("{} point motions, at most {}", self.point_motions.len(), max_motions)));
        }
        Ok(())
    }

    /// Complex dimension of the parameter space.
    pub fn parameter_dimension(&self) -> usize {
        match self.kind {
            FamilyKind::AnnulusW | FamilyKind::TranslationZ => 1,
            FamilyKind::Points => 8,
            FamilyKind::Combined => 18,
        }
    }

    /// (z', w') = (g_{t₂}^{-1}(z), R'·(t₁·w)^{-1}) with g_t(z') = z' + g_shift − t.
    pub fn patch_map(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        let t1 = if self.uses_t1() { self.t1 } else { Complex64::new(self.base.r_prime, 0.0) };
        let t2 = if self.uses_t2() { self.t2 } else { Complex64::zero() };
        (z - self.base.g_shift + t2, self.base.r_prime / (t1 * w))
    }

    /// The ninth point moves by minus the sum of the other motions on each side.
    pub fn ninth_point_motions(&self) -> Vec<Complex64> {
        self.point_motions.chunks(8).map(|c| -c.iter().sum::<Complex64>()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    /// "w_dw" for the fibre family, "dz" for the translation family.
    pub field: String,
    pub t0: Complex64,
    pub sample: (Complex64, Complex64),
    /// ∂w'/∂t or ∂z'/∂t at the sample.
    pub derivative: Complex64,
    /// Coefficient of w∂/∂w or ∂/∂z in the unprimed frame.
    pub coefficient: Complex64,
    pub expected: Complex64,
    pub symbolic_error: f64,
    pub steps: Vec<f64>,
    pub fd_errors: Vec<f64>,
    /// log(e₁/e₂)/log(h₁/h₂) for the first two steps, when above roundoff.
    pub observed_order: Option<f64>,
    /// max e(h)/h².
    pub fd_constant: f64,
    pub holds: bool,
}

const ROUNDOFF: f64 = 1e-12;

fn fd_summary<F: Fn(Complex64) -> Complex64>(f: F, t0: Complex64, exact: Complex64, steps: &[f64]) -> (Vec<f64>, Option<f64>, f64) {
    let errors: Vec<f64> = steps.iter().map(|&h| ((f(t0 + h) - f(t0 - h)) / (2.0 * h) - exact).norm()).collect();
    let order = if errors.len() >= 2 && errors[0] > ROUNDOFF && errors[1] > ROUNDOFF {
        Some((errors[0] / errors[1]).ln() / (steps[0] / steps[1]).ln())
    } else {
        None
    };
    let constant = steps.iter().zip(&errors).map(|(h, e)| e / (h * h)).fold(0.0, f64::max);
    (errors, order, constant)
}

fn fd_holds(errors: &[f64], order: Option<f64>) -> bool {
    match order {
        Some(p) => p >= 1.8,
        None => errors.iter().all(|e| *e <= ROUNDOFF),
    }
}

/// Kodaira–Spencer cocycle of the fibre family at t₀, sampled at (z, w).
pub fn ks_cocycle_w(config: &FamilyConfig, t0: Complex64, z: Complex64, w: Complex64, steps: &[f64]) -> Result<KsReport> {
    if !config.uses_t1() {
        return Err(Error::Precondition("family does not vary the fibre map".into()));
    }
    if !config.in_annulus(t0) {
        return Err(Error::Domain(format!("t0 = {} outside 1 < |t| < {}", t0, config.base.r_prime)));
    }
    let rp = Complex64::new(config.base.r_prime, 0.0);
    let w_prime = |t: Dual| Dual::constant(rp) * (t * Dual::constant(w)).recip();
    let wp = w_prime(Dual::var(t0));
    // ∂/∂w' = (∂w/∂w')·∂/∂w with w = R'/(t·w')
    let dw_dwp = (Dual::constant(rp) * (Dual::constant(t0) * Dual::var(wp.v)).recip()).d;
    let coefficient = wp.d * dw_dwp / w;
    let expected = t0.inv();
    let (fd_errors, observed_order, fd_constant) = fd_summary(|t| w_prime(Dual::constant(t)).v, t0, wp.d, steps);
    let symbolic_error = (coefficient - expected).norm() / expected.norm();
    let holds = symbolic_error < 1e-14 && fd_holds(&fd_errors, observed_order);
    Ok(KsReport {
        field: "w_dw".into(),
        t0,
        sample: (z, w),
        derivative: wp.d,
        coefficient,
        expected,
        symbolic_error,
        steps: steps.to_vec(),
        fd_errors,
        observed_order,
        fd_constant,
        holds,
    })
}

/// Kodaira–Spencer cocycle of the translation family at t₀ = 0, sampled at (z, w).
pub fn ks_cocycle_z(config: &FamilyConfig, z: Complex64, w: Complex64, steps: &[f64]) -> Result<KsReport> {
    if !config.uses_t2() {
        return Err(Error::Precondition("family does not vary the curve isomorphism".into()));
    }
    let t0 = Complex64::zero();
    let g = config.base.g_shift;
    let z_prime = |t: Dual| Dual::constant(z - g) + t;
    let zp = z_prime(Dual::var(t0));
    // ∂/∂z' = g_t'(z')·∂/∂z with g_t(z') = z' + g_shift − t
    let dz_dzp = (Dual::var(zp.v) + Dual::constant(g - t0)).d;
    let coefficient = zp.d * dz_dzp;
    let expected = Complex64::new(1.0, 0.0);
    let (fd_errors, observed_order, fd_constant) = fd_summary(|t| z_prime(Dual::constant(t)).v, t0, zp.d, steps);
    let symbolic_error = (coefficient - expected).norm();
    let holds = symbolic_error == 0.0 && fd_holds(&fd_errors, observed_order);
    Ok(KsReport {
        field: "dz".into(),
        t0,
        sample: (z, w),
        derivative: zp.d,
        coefficient,
        expected,
        symbolic_error,
        steps: steps.to_vec(),
        fd_errors,
        observed_order,
        fd_constant,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentCohomology {
    pub n_points: usize,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    /// Rank of the evaluation map from the 8-dimensional space of vector fields on P², when points are given.
    pub evaluation_rank: Option<usize>,
    /// Whether four of the points with no three collinear were found (or assumed).
    pub general_four: bool,
}

/// (h⁰, h¹, h²) of the tangent bundle of P² blown up at N general points.
pub fn tangent_cohomology_dims(n_points: usize) -> Result<TangentCohomology> {
    if n_points < 4 {
        return Err(Error::Precondition(format!("need at least 4 points, got {}", n_points)));
    }
    Ok(TangentCohomology { n_points, h0: 0, h1: 2 * n_points - 8, h2: 0, evaluation_rank: None, general_four: true })
}

fn det3(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> BigRational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0]) + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Exact dimensions for given points, from the rank of gl₃ → ⊕ T_{p_i}P².
///
/// h⁰ = 8 − rank and h¹ = 2N − rank; h² vanishes for any N.
pub fn tangent_cohomology_for_points(points: &[Vec<BigRational>]) -> Result<TangentCohomology> {
    let n = points.len();
    if n < 4 {
        return Err(Error::Precondition(format!("need at least 4 points, got {}", n)));
    }
    let mut rows: QMatrix = Vec::with_capacity(2 * n);
    for p in points {
        let k = (0..3).find(|&i| !p[i].is_zero()).ok_or_else(|| Error::InvalidInput("zero homogeneous vector".into()))?;
        let p: Vec<BigRational> = p.iter().map(|x| x / &p[k]).collect();
        for i in (0..3).filter(|&i| i != k) {
            // column (a, b) is E_ab: (E_ab·p)_i − (E_ab·p)_k·p_i
            let row = (0..3)
                .cartesian_product(0..3)
                .map(|(a, b)| {
                    let ai = if a == i { p[b].clone() } else { BigRational::zero() };
                    let ak = if a == k { p[b].clone() } else { BigRational::zero() };
                    ai - ak * &p[i]
                })
                .collect();
            rows.push(row);
        }
    }
    let r = rank(&rows);
    let general_four = points.iter().combinations(4).any(|four| four.iter().combinations(3).all(|t| !det3(t[0], t[1], t[2]).is_zero()));
    Ok(TangentCohomology { n_points: n, h0: 8 - r, h1: 2 * n - r, h2: 0, evaluation_rank: Some(r), general_four })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub kind: FamilyKind,
    pub parameter_dimension: usize,
    pub w_cocycle: Option<KsReport>,
    pub z_cocycle: Option<KsReport>,
    /// The fibre transitions do not depend on the parameters, so the points family restricts to zero on the second side.
    pub fibre_transitions_parameter_free: bool,
    pub notes: Vec<String>,
}

pub fn family_summary(config: &FamilyConfig, t0: Complex64, steps: &[f64]) -> Result<FamilySummary> {
    config.validate()?;
    let sample = (Complex64::new(0.1, 0.2), Complex64::new(0.7, 0.0));
    let w_cocycle = if config.uses_t1() { Some(ks_cocycle_w(config, t0, sample.0, sample.1, steps)?) } else { None };
    let z_cocycle = if config.uses_t2() { Some(ks_cocycle_z(config, sample.0, sample.1, steps)?) } else { None };
    let fibre_transitions_parameter_free = check_transitions(&config.base).all_hold;
    let notes = vec![
        "injectivity of the full Kodaira-Spencer map relies on sheaf cohomology of the blow-ups and is not computed".into(),
        "w-cocycle and z-cocycle span the image of vector fields on W*; point motions act on one side only".into(),
    ];
    Ok(FamilySummary { kind: config.kind, parameter_dimension: config.parameter_dimension(), w_cocycle, z_cocycle, fibre_transitions_parameter_free, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::torus_pic::{FlatBundleClass, TorusShape};

    fn datum(r_prime: f64) -> GluingDatum {
        GluingDatum::new(&TorusShape::square(), 9, &FlatBundleClass::golden_mean(), 2.0, r_prime, Complex64::new(0.1, -0.2)).unwrap()
    }

    #[test]
    fn w_derivative_oracle() {
        // t0 = 1 sits on the annulus boundary, so evaluate the map directly there
        let cfg = FamilyConfig::at_base(FamilyKind::AnnulusW, datum(2.0));
        let w = Complex64::new(0.5, 0.0);
        let wp = |t: Dual| Dual::constant(Complex64::new(2.0, 0.0)) * (t * Dual::constant(w)).recip();
        let d = wp(Dual::var(Complex64::new(1.0, 0.0)));
        assert_eq!(d.v, Complex64::new(4.0, 0.0));
        assert_eq!(d.d, Complex64::new(-4.0, 0.0));
        assert!(ks_cocycle_w(&cfg, Complex64::new(1.0, 0.0), Complex64::zero(), w, &[1e-3]).is_err());
    }

    #[test]
    fn w_cocycle_is_inverse_t() {
        let cfg = FamilyConfig::at_base(FamilyKind::AnnulusW, datum(3.0));
        let t0 = Complex64::new(1.5, 0.7);
        let rep = ks_cocycle_w(&cfg, t0, Complex64::new(0.1, 0.2), Complex64::new(0.7, 0.0), &[1e-3, 1e-4]).unwrap();
        assert!(rep.holds, "{:?}", rep);
        let order = rep.observed_order.unwrap();
        assert!((order - 2.0).abs() < 0.1, "{}", order);
    }

    #[test]
    fn coefficient_independent_of_r_prime() {
        let t0 = Complex64::new(1.2, 0.3);
        let a = ks_cocycle_w(&FamilyConfig::at_base(FamilyKind::AnnulusW, datum(2.0)), t0, Complex64::zero(), Complex64::new(0.6, 0.1), &[1e-3, 1e-4]).unwrap();
        let b = ks_cocycle_w(&FamilyConfig::at_base(FamilyKind::AnnulusW, datum(7.0)), t0, Complex64::zero(), Complex64::new(0.6, 0.1), &[1e-3, 1e-4]).unwrap();
        assert!((a.coefficient - b.coefficient).norm() < 1e-14);
    }

    #[test]
    fn z_cocycle_is_unit() {
        let cfg = FamilyConfig::at_base(FamilyKind::TranslationZ, datum(2.0));
        let rep = ks_cocycle_z(&cfg, Complex64::new(0.3, 0.1), Complex64::new(0.5, 0.0), &[1e-3, 1e-4]).unwrap();
        assert_eq!(rep.derivative, Complex64::new(1.0, 0.0));
        assert!(rep.holds);
        assert!(ks_cocycle_z(&FamilyConfig::at_base(FamilyKind::AnnulusW, datum(2.0)), Complex64::zero(), Complex64::new(0.5, 0.0), &[1e-3]).is_err());
    }

    #[test]
    fn cohomology_formula() {
        let d = tangent_cohomology_dims(9).unwrap();
        assert_eq!((d.h0, d.h1, d.h2), (0, 10, 0));
        let d = tangent_cohomology_dims(4).unwrap();
        assert_eq!((d.h0, d.h1, d.h2), (0, 0, 0));
        assert!(tangent_cohomology_dims(3).is_err());
    }

    fn pts(v: &[[i64; 3]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn cohomology_from_points() {
        let general = pts(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [2, -1, 5], [3, 1, -2], [1, 4, 9], [5, 2, 7]]);
        let d = tangent_cohomology_for_points(&general).unwrap();
        assert_eq!((d.h0, d.h1, d.h2), (0, 10, 0));
        assert!(d.general_four);
        // four collinear points leave the vector fields fixing a line pointwise
        let collinear = pts(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 2, 0]]);
        let d = tangent_cohomology_for_points(&collinear).unwrap();
        assert!(!d.general_four);
        assert!(d.h0 > 0);
        assert_eq!(d.h1 as i64 - d.h0 as i64, 2 * 4 - 8);
    }

    #[test]
    fn config_domains() {
        let mut cfg = FamilyConfig::at_base(FamilyKind::Combined, datum(3.0));
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.parameter_dimension(), 18);
        cfg.t2 = Complex64::new(1.5, 0.0);
        assert!(matches!(cfg.validate(), Err(Error::Domain(_))));
        cfg.t2 = Complex64::zero();
        cfg.t1 = Complex64::new(0.5, 0.0);
        assert!(cfg.validate().is_err());
        cfg.t1 = Complex64::new(2.0, 0.0);
        let (zp, wp) = cfg.patch_map(Complex64::new(0.3, 0.0), Complex64::new(1.5, 0.0));
        assert!((zp - Complex64::new(0.2, 0.2)).norm() < 1e-15);
        assert!((wp - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn summary_reports_both_cocycles() {
        let cfg = FamilyConfig::at_base(FamilyKind::Combined, datum(3.0));
        let s = family_summary(&cfg, Complex64::new(2.0, 0.5), &[1e-3, 1e-4]).unwrap();
        assert!(s.w_cocycle.unwrap().holds && s.z_cocycle.unwrap().holds);
        assert!(s.fibre_transitions_parameter_free);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::torus_pic::{FlatBundleClass, TorusShape};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn w_cocycle_matches_inverse_t(r in 1.05f64..2.95, arg in 0.0f64..std::f64::consts::TAU) {
            let base = GluingDatum::new(&TorusShape::square(), 9, &FlatBundleClass::golden_mean(), 2.0, 3.0, Complex64::new(0.0, 0.0)).unwrap();
            let cfg = FamilyConfig::at_base(FamilyKind::AnnulusW, base);
            let t0 = Complex64::from_polar(r, arg);
            let rep = ks_cocycle_w(&cfg, t0, Complex64::new(0.1, 0.2), Complex64::new(0.7, 0.0), &[1e-3, 1e-4]).unwrap();
            prop_assert!(rep.holds);
            // e(h)/h² ≈ |w'''|/6 = |R'|/(|t|⁴|w|), bounded over the annulus
            prop_assert!(rep.fd_constant < 3.0 / 0.7 / r.powi(4) * 1.01);
        }

        #[test]
        fn fixed_locus_shape(m in proptest::array::uniform3(proptest::array::uniform3(-3i64..=3))) {
            if let Ok(aut) = ProjAut::integer(m) {
                let locus = fixed_locus(&aut);
                prop_assert!(!locus.is_empty());
                let whole = locus.iter().any(|s| s.dimension == 2);
                prop_assert_eq!(whole, aut.is_identity());
                for s in &locus {
                    for p in &s.basis {
                        prop_assert!(projective::proj_eq(&aut.apply(p), p) || projective::norm(&aut.apply(p)) < 1e-9);
                    }
                    if !aut.is_identity() {
                        prop_assert!(s.dimension <= 1);
                    }
                }
            }
        }
    }
}
