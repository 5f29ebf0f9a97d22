//! The torus of flat line bundles on an elliptic curve.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, Coord};

/// Modulus of the elliptic curve C = ℂ/⟨1, τ⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusShape {
    pub tau: Complex64,
}

impl TorusShape {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(Error::InvalidInput(format!("Im(tau) must be positive, got {}", tau)));
        }
        Ok(TorusShape { tau })
    }

    pub fn square() -> Self {
        TorusShape { tau: Complex64::new(0.0, 1.0) }
    }

    /// Lift of the class a + bτ to the complex plane.
    pub fn point(&self, a: f64, b: f64) -> Complex64 {
        Complex64::new(a, 0.0) + self.tau * b
    }

    /// Area of the fundamental parallelogram.
    pub fn cell_area(&self) -> f64 {
        self.tau.im
    }
}

/// The class [a + bτ] in Pic⁰(C), coordinates reduced to [0, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatBundleClass {
    pub a: Coord,
    pub b: Coord,
}

impl FlatBundleClass {
    pub fn new(a: Coord, b: Coord) -> Self {
        FlatBundleClass { a: a.frac(), b: b.frac() }
    }

    pub fn trivial() -> Self {
        FlatBundleClass { a: Coord::zero(), b: Coord::zero() }
    }

    pub fn rational(a: (i64, i64), b: (i64, i64)) -> Self {
        FlatBundleClass { a: Coord::ratio(a.0, a.1), b: Coord::ratio(b.0, b.1) }
    }

    pub fn float(a: f64, b: f64) -> Self {
        FlatBundleClass { a: Coord::float(a), b: Coord::float(b) }
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Ok(FlatBundleClass { a: a.parse()?, b: b.parse()? })
    }

    /// ((√5 − 1)/2, 0) truncated to 30 decimal digits.
    pub fn golden_mean() -> Self {
        FlatBundleClass::parse(GOLDEN_MEAN_30, "0").unwrap()
    }

    /// (Σ_{k≤6} 10^{-k!}, 0) truncated to 30 decimal digits.
    pub fn truncated_liouville() -> Self {
        FlatBundleClass::parse(LIOUVILLE_30, "0").unwrap()
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.a.is_exact() && self.b.is_exact()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.a.to_f64(), self.b.to_f64())
    }

    pub fn pow(&self, n: i64) -> Self {
        FlatBundleClass { a: self.a.scale(n), b: self.b.scale(n) }
    }

    pub fn neg(&self) -> Self {
        FlatBundleClass { a: self.a.neg(), b: self.b.neg() }
    }

    /// Character value on the loop 1 (p = 1, q = 0) or τ (p = 0, q = 1).
    pub fn character(&self, p: i64, q: i64) -> Complex64 {
        let turns = self.a.to_f64() * p as f64 + self.b.to_f64() * q as f64;
        Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
    }
}

pub const GOLDEN_MEAN_30: &str = "0.618033988749894848204586834365";
pub const LIOUVILLE_30: &str = "0.110001000000000000000001000000";

pub fn class_add(x: &FlatBundleClass, y: &FlatBundleClass) -> FlatBundleClass {
    FlatBundleClass { a: x.a.add(&y.a), b: x.b.add(&y.b) }
}

pub fn class_sub(x: &FlatBundleClass, y: &FlatBundleClass) -> FlatBundleClass {
    FlatBundleClass { a: x.a.sub(&y.a), b: x.b.sub(&y.b) }
}

/// d₀ of the difference class, exactly when both inputs are rational.
pub fn invariant_distance_coord(x: &FlatBundleClass, y: &FlatBundleClass) -> Coord {
    let v = class_sub(y, x);
    v.a.dist_to_integer().add_unreduced(&v.b.dist_to_integer())
}

pub fn invariant_distance(x: &FlatBundleClass, y: &FlatBundleClass) -> f64 {
    invariant_distance_coord(x, y).to_f64()
}

pub fn distance_to_trivial(l: &FlatBundleClass) -> f64 {
    invariant_distance(&FlatBundleClass::trivial(), l)
}

impl Coord {
    /// Sum without reduction mod 1; used for distances that may reach 1.
    fn add_unreduced(&self, other: &Coord) -> Coord {
        match (self, other) {
            (Coord::Exact(x), Coord::Exact(y)) => Coord::Exact(x + y),
            _ => Coord::Float(self.to_f64() + other.to_f64()),
        }
    }
}

/// Distances to the integers of n·x for n = 1..=n_max.
fn coordinate_sequence(x: &Coord, n_max: u64) -> Vec<f64> {
    if let Some((p, q)) = x.as_i128_fraction() {
        if q < i128::MAX / 4 {
            let mut r: i128 = 0;
            return (1..=n_max)
                .map(|_| {
                    r += p;
                    if r >= q {
                        r -= q;
                    }
                    let m = r.min(q - r);
                    m as f64 / q as f64
                })
                .collect();
        }
    }
    match x {
        Coord::Float(v) => (1..=n_max)
            .map(|n| {
                let y = crate::exact::frac_f64(*v * n as f64);
                y.min(1.0 - y)
            })
            .collect(),
        Coord::Exact(r) => (1..=n_max)
            .map(|n| {
                let y = crate::exact::frac_rational(&(r * num_bigint::BigInt::from(n)));
                let z = BigRational::from_integer(1.into()) - &y;
                rational_to_f64(if y < z { &y } else { &z })
            })
            .collect(),
    }
}

/// d(𝕀, Lⁿ) for n = 1..=n_max.
pub fn power_distance_sequence(l: &FlatBundleClass, n_max: u64) -> Result<Vec<(u64, f64)>> {
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let da = coordinate_sequence(&l.a, n_max);
    let db = coordinate_sequence(&l.b, n_max);
    Ok((1..=n_max).zip(da.into_iter().zip(db)).map(|(n, (x, y))| (n, x + y)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophantineReport {
    pub samples: Vec<(u64, f64)>,
    pub fitted_exponent: f64,
    pub fitted_offset: f64,
    pub passes: bool,
    pub worst_n: u64,
    /// Indices n at which d_n drops below every earlier value.
    pub record_n: Vec<u64>,
    pub least_squares_slope: f64,
}

/// Finite-sample estimate of the exponent A in −log d_n ≤ A·log n + C.
///
/// The offset C is the least-squares intercept through the best
/// approximations; A is then the smallest slope with that intercept which
/// bounds every sample and is at least the least-squares slope.
pub fn diophantine_estimate(l: &FlatBundleClass, n_max: u64, exponent_cap: f64) -> Result<DiophantineReport> {
    if n_max < 16 {
        return Err(Error::Precondition("n_max must be at least 16".into()));
    }
    let samples = power_distance_sequence(l, n_max)?;
    if let Some(&(n, _)) = samples.iter().find(|(_, d)| *d == 0.0) {
        return Err(Error::TorsionClass { n });
    }
    let mut record_n = Vec::new();
    let mut best = f64::INFINITY;
    for &(n, d) in &samples {
        if d < best {
            best = d;
            record_n.push(n);
        }
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(n, _)| *n >= 2 && record_n.binary_search(n).is_ok())
        .map(|(n, d)| ((*n as f64).ln(), -d.ln()))
        .collect();
    let (slope, offset) = least_squares(&pts);
    let mut exponent = slope;
    let mut worst_n = samples.get(1).map(|s| s.0).unwrap_or(2);
    let mut worst_ratio = f64::NEG_INFINITY;
    for &(n, d) in samples.iter().filter(|(n, _)| *n >= 2) {
        let ratio = (-d.ln() - offset) / (n as f64).ln();
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_n = n;
        }
    }
    if worst_ratio > exponent {
        exponent = worst_ratio;
    }
    Ok(DiophantineReport {
        samples,
        fitted_exponent: exponent,
        fitted_offset: offset,
        passes: exponent <= exponent_cap,
        worst_n,
        record_n,
        least_squares_slope: slope,
    })
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    match pts.len() {
        0 => (0.0, 0.0),
        1 => (0.0, pts[0].1),
        k => {
            let k = k as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            if sxx == 0.0 {
                (0.0, my)
            } else {
                let s = sxy / sxx;
                (s, my - s * mx)
            }
        }
    }
}

/// The ninth point q₉ = c − ℓ₀ − Σ qᵢ.
pub fn ninth_point(c: &FlatBundleClass, ell0: &FlatBundleClass, q: &[FlatBundleClass; 8]) -> FlatBundleClass {
    let sum = q.iter().fold(FlatBundleClass::trivial(), |acc, x| class_add(&acc, x));
    class_sub(&class_sub(c, ell0), &sum)
}

/// Continued-fraction convergent denominators of a rational in (0, 1), up to `bound`.
pub fn convergent_denominators(x: &BigRational, bound: u64) -> Vec<u64> {
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut out = vec![1u64];
    p = p.mod_floor(&q);
    while !p.is_zero() {
        std::mem::swap(&mut p, &mut q);
        let (a, r) = p.div_rem(&q);
        p = r;
        let next = &a * &k + &k_prev;
        k_prev = k;
        k = next;
        match k.to_u64() {
            Some(v) if v <= bound => {
                if out.last() != Some(&v) {
                    out.push(v)
                }
            }
            _ => break,
        }
    }
    out
}

pub fn is_torsion_up_to(l: &FlatBundleClass, n_max: u64) -> Option<u64> {
    (1..=n_max).find(|&n| l.pow(n as i64).is_trivial())
}

impl Default for FlatBundleClass {
    fn default() -> Self {
        FlatBundleClass::trivial()
    }
}

#[cfg(test)]
mod tests;
