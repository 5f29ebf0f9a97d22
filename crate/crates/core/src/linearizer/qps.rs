use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exact::{rational_to_f64, Coord};
use crate::torus_pic::{class_add, FlatBundleClass};

/// Σ_m c_m·e^{2πi(m+α)z}, a section of the flat bundle with class (α, β)
/// written in a chart coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpSeries {
    pub class: FlatBundleClass,
    pub modes: BTreeMap<i64, Complex64>,
}

/// Exponent m + α, exact before rounding when α is rational.
pub fn exponent(alpha: &Coord, m: i64) -> f64 {
    match alpha {
        Coord::Exact(a) => rational_to_f64(&(a + BigRational::from_integer(m.into()))),
        Coord::Float(a) => m as f64 + a,
    }
}

/// e^{2πi·w·z}.
pub fn wave(w: f64, z: Complex64) -> Complex64 {
    (Complex64::new(0.0, TAU * w) * z).exp()
}

/// Integer k with α₂ ≈ α₁ + k, when the two reduced coordinates agree mod 1.
fn alignment(a1: &Coord, a2: &Coord) -> Option<i64> {
    match (a1, a2) {
        (Coord::Exact(x), Coord::Exact(y)) => (x == y).then_some(0),
        _ => {
            let d = a2.to_f64() - a1.to_f64();
            let k = d.round();
            ((d - k).abs() < 1e-9).then_some(k as i64)
        }
    }
}

/// Whether α₁ + α₂ ≥ 1, i.e. the mode carry of a product.
fn carry(a1: &Coord, a2: &Coord) -> i64 {
    match (a1, a2) {
        (Coord::Exact(x), Coord::Exact(y)) => i64::from(x + y >= BigRational::from_integer(1.into())),
        _ => {
            let s = a1.to_f64() + a2.to_f64();
            let r = class_add(&FlatBundleClass::new(a1.clone(), Coord::zero()), &FlatBundleClass::new(a2.clone(), Coord::zero()))
                .a
                .to_f64();
            (s - r).round() as i64
        }
    }
}

impl QpSeries {
    pub fn zero(class: FlatBundleClass) -> Self {
        QpSeries { class, modes: BTreeMap::new() }
    }

    pub fn single(class: FlatBundleClass, m: i64, c: Complex64) -> Self {
        let mut s = QpSeries::zero(class);
        s.modes.insert(m, c);
        s
    }

    pub fn one() -> Self {
        QpSeries::single(FlatBundleClass::trivial(), 0, Complex64::new(1.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.modes.values().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Whether this is a section of the bundle with the given class.
    pub fn same_bundle(&self, class: &FlatBundleClass) -> bool {
        let db = class.b.to_f64() - self.class.b.to_f64();
        alignment(&self.class.a, &class.a).is_some() && (db - db.round()).abs() < 1e-9
    }

    pub fn exponent(&self, m: i64) -> f64 {
        exponent(&self.class.a, m)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.modes.iter().map(|(m, c)| c * wave(self.exponent(*m), z)).sum()
    }

    /// Coefficients of f(z + a) in the same basis.
    pub fn shift(&self, a: Complex64) -> QpSeries {
        let modes = self.modes.iter().map(|(m, c)| (*m, c * wave(self.exponent(*m), a))).collect();
        QpSeries { class: self.class.clone(), modes }
    }

    pub fn scale(&self, s: Complex64) -> QpSeries {
        let modes = self.modes.iter().map(|(m, c)| (*m, c * s)).collect();
        QpSeries { class: self.class.clone(), modes }
    }

    pub fn derivative(&self) -> QpSeries {
        let modes = self
            .modes
            .iter()
            .map(|(m, c)| (*m, c * Complex64::new(0.0, TAU * self.exponent(*m))))
            .collect();
        QpSeries { class: self.class.clone(), modes }
    }

    pub fn add_assign(&mut self, other: &QpSeries) {
        if other.is_zero() {
            return;
        }
        let k = match alignment(&self.class.a, &other.class.a) {
            Some(k) => k,
            None if self.is_zero() => {
                *self = other.clone();
                return;
            }
            None => panic!("adding sections of different bundles: {:?} vs {:?}", self.class, other.class),
        };
        for (m, c) in &other.modes {
            *self.modes.entry(m + k).or_default() += c;
        }
    }

    pub fn sub(&self, other: &QpSeries) -> QpSeries {
        let mut out = self.clone();
        out.add_assign(&other.scale(Complex64::new(-1.0, 0.0)));
        out
    }

    /// Product, dropping modes with |m| > cap; returns the number of dropped terms.
    pub fn mul(&self, other: &QpSeries, cap: i64) -> (QpSeries, usize) {
        let class = class_add(&self.class, &other.class);
        let shift = carry(&self.class.a, &other.class.a);
        let mut modes: BTreeMap<i64, Complex64> = BTreeMap::new();
        let mut dropped = 0;
        for (m1, c1) in &self.modes {
            for (m2, c2) in &other.modes {
                let m = m1 + m2 + shift;
                if m.abs() > cap {
                    dropped += 1;
                    continue;
                }
                *modes.entry(m).or_default() += c1 * c2;
            }
        }
        (QpSeries { class, modes }, dropped)
    }

    /// Max of |f| over the horizontal lines Im z = y for each y, with doubling refinement.
    pub fn sup_on_lines(&self, ys: &[f64]) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sample = |n: usize| {
            let mut best: f64 = 0.0;
            for &y in ys {
                for i in 0..n {
                    let z = Complex64::new(i as f64 / n as f64, y);
                    best = best.max(self.eval(z).norm());
                }
            }
            best
        };
        let width = self.modes.keys().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0);
        crate::cover_cech::cochain::refined(sample, (8 * width + 64).next_power_of_two(), 0.01)
    }

    /// ‖f‖ on a band |Im z| ≤ h by the maximum principle on the annulus.
    pub fn sup_on_band(&self, h: f64) -> f64 {
        self.sup_on_lines(&[-h, h])
    }

    pub fn max_coefficient(&self) -> f64 {
        self.modes.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
