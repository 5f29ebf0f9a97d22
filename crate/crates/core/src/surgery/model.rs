use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exact::Coord;

/// Fibre map w ↦ ρ·e^{2πiθ}·w^e, kept symbolic in (ρ, θ, e).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub modulus: f64,
    pub turns: Coord,
    pub exponent: i64,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial { modulus: 1.0, turns: Coord::zero(), exponent: 1 }
    }

    pub fn rotation(turns: Coord) -> Self {
        Monomial { modulus: 1.0, turns: turns.frac(), exponent: 1 }
    }

    pub fn inversion() -> Self {
        Monomial { modulus: 1.0, turns: Coord::zero(), exponent: -1 }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Monomial) -> Monomial {
        // ρ₁e^{2πiθ₁}(ρ₂e^{2πiθ₂}w^{e₂})^{e₁}
        Monomial {
            modulus: self.modulus * other.modulus.powi(self.exponent as i32),
            turns: self.turns.add(&other.turns.scale(self.exponent)).frac(),
            exponent: self.exponent * other.exponent,
        }
    }

    pub fn coefficient(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, TAU * self.turns.to_f64())
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        self.coefficient() * w.powi(self.exponent as i32)
    }

    /// w'·dw/(w·dw') pulled back: the factor e in φ*(dw'/w') = e·dw/w.
    pub fn log_derivative_factor(&self) -> i64 {
        self.exponent
    }

    pub fn preserves_modulus(&self) -> bool {
        self.modulus == 1.0 && self.exponent.abs() == 1
    }
}

/// Chart map (z, w) ↦ (z + shift, m(w)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartMap {
    pub shift: Complex64,
    pub fibre: Monomial,
}

impl ChartMap {
    pub fn compose(&self, other: &ChartMap) -> ChartMap {
        ChartMap { shift: other.shift + self.shift, fibre: self.fibre.compose(&other.fibre) }
    }

    pub fn apply(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        (z + self.shift, self.fibre.apply(w))
    }

    pub fn same_as(&self, other: &ChartMap) -> bool {
        self.shift == other.shift
            && self.fibre.exponent == other.fibre.exponent
            && self.fibre.modulus == other.fibre.modulus
            && self.fibre.turns.sub(&other.fibre.turns).dist_to_integer().is_zero()
    }
}

/// First-order dual number for exact Jacobians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: Complex64,
    pub d: Complex64,
}

impl Dual {
    pub fn var(v: Complex64) -> Self {
        Dual { v, d: Complex64::new(1.0, 0.0) }
    }

    pub fn constant(v: Complex64) -> Self {
        Dual { v, d: Complex64::new(0.0, 0.0) }
    }

    pub fn recip(self) -> Self {
        Dual { v: self.v.inv(), d: -self.d / (self.v * self.v) }
    }

    pub fn powi(self, n: i32) -> Self {
        Dual { v: self.v.powi(n), d: self.d * self.v.powi(n - 1) * n as f64 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

/// Coefficient c of φ*(dz'∧dw'/w') = c·dz∧dw/w at (z, w), via dual-number Jacobians.
pub fn two_form_factor(map: &ChartMap, z: Complex64, w: Complex64) -> Complex64 {
    let fibre = |w: Dual| {
        let e = map.fibre.exponent as i32;
        let base = if e >= 0 { w.powi(e) } else { w.recip().powi(-e) };
        Dual::constant(map.fibre.coefficient()) * base
    };
    let shift = |z: Dual| z + Dual::constant(map.shift);
    // ∂z'/∂z, ∂z'/∂w, ∂w'/∂z, ∂w'/∂w
    let dzz = shift(Dual::var(z)).d;
    let dzw = Complex64::new(0.0, 0.0);
    let dwz = Complex64::new(0.0, 0.0);
    let wp = fibre(Dual::var(w));
    let det = dzz * wp.d - dzw * dwz;
    det * w / wp.v
}
