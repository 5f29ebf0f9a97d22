use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ln_rational_abs, rational_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorantKind {
    Schroder,
    Extension,
    Hat,
}

/// Coefficients A_ν of a majorant series, index ν (entry 0 is unused and zero).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorantSeries {
    pub kind: MajorantKind,
    pub coefficients: Vec<BigRational>,
    /// divisors[i] = d_{i+1}.
    pub divisors: Vec<BigRational>,
    pub k: BigRational,
    pub m: BigRational,
    pub q: BigRational,
}

impl MajorantSeries {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, nu: usize) -> &BigRational {
        &self.coefficients[nu]
    }

    pub fn ln_coefficient(&self, nu: usize) -> f64 {
        let c = &self.coefficients[nu];
        if c.is_zero() {
            f64::NEG_INFINITY
        } else {
            ln_rational_abs(c)
        }
    }

    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(rational_to_f64).collect()
    }
}

fn check_divisors(divisors: &[BigRational], needed: usize) -> Result<()> {
    if divisors.len() < needed.max(1) {
        return Err(Error::Precondition(format!("need {} divisors, got {}", needed.max(1), divisors.len())));
    }
    if let Some(d) = divisors.iter().find(|d| !d.is_positive()) {
        return Err(Error::Precondition(format!("divisor {} is not positive", d)));
    }
    Ok(())
}

fn check_positive(name: &str, x: &BigRational) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{} must be positive, got {}", name, x)))
    }
}

/// Σ_{ν≥2} d_{ν−1}·A_ν X^ν = K·M·A²/(1 − M·A) with A = X + Σ_{ν≥2} A_ν X^ν.
pub fn majorant_schroder(k: &BigRational, m: &BigRational, divisors: &[BigRational], order: usize) -> Result<MajorantSeries> {
    check_positive("K", k)?;
    check_positive("M", m)?;
    check_divisors(divisors, order.saturating_sub(1))?;
    let mut a = vec![BigRational::zero(); order + 1];
    // g = M·A/(1 − M·A), so g = M·A + M·A·g
    let mut g = vec![BigRational::zero(); order + 1];
    if order >= 1 {
        a[1] = BigRational::one();
        g[1] = m.clone();
    }
    for nu in 2..=order {
        let rhs: BigRational = (1..nu).map(|i| &a[i] * &g[nu - i]).sum();
        a[nu] = k * rhs / &divisors[nu - 2];
        let conv: BigRational = (1..nu).map(|i| &a[i] * &g[nu - i]).sum();
        g[nu] = m * (&a[nu] + conv);
    }
    Ok(MajorantSeries {
        kind: MajorantKind::Schroder,
        coefficients: a,
        divisors: divisors.to_vec(),
        k: k.clone(),
        m: m.clone(),
        q: BigRational::zero(),
    })
}

/// Σ_{n≥1} d_n·A_n X^n = 2K·Q·(M + A)·X/(1 − Q·X).
pub fn majorant_extension(k: &BigRational, q: &BigRational, m: &BigRational, divisors: &[BigRational], order: usize) -> Result<MajorantSeries> {
    check_positive("K", k)?;
    check_positive("Q", q)?;
    check_positive("M", m)?;
    check_divisors(divisors, order)?;
    let two_kq = BigRational::from_integer(BigInt::from(2)) * k * q;
    let mut a = vec![BigRational::zero(); order + 1];
    // running s_n = Σ_{r=0}^{n−1} Q^r·c_{n−r} with c_1 = M, c_i = A_{i−1}
    let mut s = BigRational::zero();
    for n in 1..=order {
        let c = if n == 1 { m.clone() } else { a[n - 1].clone() };
        s = q * s + c;
        a[n] = &two_kq * &s / &divisors[n - 1];
    }
    Ok(MajorantSeries {
        kind: MajorantKind::Extension,
        coefficients: a,
        divisors: divisors.to_vec(),
        k: k.clone(),
        m: m.clone(),
        q: q.clone(),
    })
}

/// B̂ together with B = X + X·A from the extension majorant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HatComparison {
    pub hat: MajorantSeries,
    pub b: Vec<BigRational>,
    /// ln(B̂_ν / B_ν) for ν ≥ 2.
    pub log_margins: Vec<f64>,
}

/// Σ_{n≥2} d_{n−1}·B̂_n X^n = 2KQ·(M + 1)·B̂²/(1 − Q·B̂), checked against B_ν = A_{ν−1}.
pub fn majorant_hat(k: &BigRational, q: &BigRational, m: &BigRational, divisors: &[BigRational], order: usize) -> Result<HatComparison> {
    check_positive("K", k)?;
    check_positive("Q", q)?;
    check_positive("M", m)?;
    check_divisors(divisors, order.saturating_sub(1))?;
    let c = BigRational::from_integer(BigInt::from(2)) * k * q * (m + BigRational::one());
    let mut h = vec![BigRational::zero(); order + 1];
    // g = B̂/(1 − Q·B̂), so g = B̂ + Q·B̂·g
    let mut g = vec![BigRational::zero(); order + 1];
    if order >= 1 {
        h[1] = BigRational::one();
        g[1] = BigRational::one();
    }
    for nu in 2..=order {
        let rhs: BigRational = (1..nu).map(|i| &h[i] * &g[nu - i]).sum();
        h[nu] = &c * rhs / &divisors[nu - 2];
        let conv: BigRational = (1..nu).map(|i| &h[i] * &g[nu - i]).sum();
        g[nu] = &h[nu] + q * conv;
    }
    let ext = majorant_extension(k, q, m, divisors, order.saturating_sub(1).max(1))?;
    let mut b = vec![BigRational::zero(); order + 1];
    if order >= 1 {
        b[1] = BigRational::one();
    }
    let mut log_margins = Vec::new();
    for nu in 2..=order {
        b[nu] = ext.coefficients[nu - 1].clone();
        if h[nu] < b[nu] {
            return Err(Error::DominationFailure { order: nu });
        }
        log_margins.push(ln_rational_abs(&h[nu]) - ln_rational_abs(&b[nu]));
    }
    let hat = MajorantSeries { kind: MajorantKind::Hat, coefficients: h, divisors: divisors.to_vec(), k: k.clone(), m: m.clone(), q: q.clone() };
    Ok(HatComparison { hat, b, log_margins })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// Lower bound on the radius of convergence; +∞ when the window tail vanishes.
    pub radius: f64,
    pub unbounded: bool,
    /// Estimate using windows [lo, hi'] for each hi' up to hi.
    pub refinements: Vec<(usize, f64)>,
}

/// 1 / max_{ν ∈ window} A_ν^{1/ν}.
pub fn radius_estimate(series: &MajorantSeries, lo: usize, hi: usize) -> Result<RadiusEstimate> {
    if lo == 0 || lo > hi || hi > series.order() {
        return Err(Error::Precondition(format!("window {}..={} outside orders 1..={}", lo, hi, series.order())));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut refinements = Vec::new();
    for nu in lo..=hi {
        worst = worst.max(series.ln_coefficient(nu) / nu as f64);
        refinements.push((nu, (-worst).exp()));
    }
    let unbounded = worst == f64::NEG_INFINITY;
    Ok(RadiusEstimate { radius: if unbounded { f64::INFINITY } else { (-worst).exp() }, unbounded, refinements })
}

/// Series with prescribed coefficients, for root tests on arbitrary data.
pub fn from_coefficients(coefficients: Vec<BigRational>) -> MajorantSeries {
    let mut c = vec![BigRational::zero()];
    c.extend(coefficients);
    MajorantSeries {
        kind: MajorantKind::Schroder,
        coefficients: c,
        divisors: Vec::new(),
        k: BigRational::one(),
        m: BigRational::one(),
        q: BigRational::zero(),
    }
}
