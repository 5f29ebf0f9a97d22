use std::f64::consts::{PI, TAU};

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::GluingDatum;
use crate::error::{Error, Result};
use crate::torus_pic::TorusShape;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub r: f64,
    pub r_prime: f64,
    /// ∫_C i·dz∧dz̄ over the unit cell.
    pub curve_integral: f64,
    pub volume: f64,
    pub quadrature: f64,
    pub relative_error: f64,
    /// log r + log r'.
    pub log_sum: f64,
    /// V_X / (4π·curve_integral) when a total volume is given.
    pub bound: Option<f64>,
    pub holds: Option<bool>,
    pub convention: String,
}

pub fn curve_integral(shape: &TorusShape) -> f64 {
    2.0 * shape.tau.im
}

/// 4π·(∫_C i·dz∧dz̄)·log(r·r').
pub fn closed_form_volume(shape: &TorusShape, r: f64, r_prime: f64) -> f64 {
    4.0 * PI * curve_integral(shape) * (r * r_prime).ln()
}

/// ∫ σ∧σ̄ over W*_{r,r'} by tensor Gauss–Legendre in (s, t, ρ, φ), z = s + tτ, w = ρe^{iφ}.
pub fn quadrature_volume(shape: &TorusShape, r: f64, r_prime: f64, degree: usize) -> f64 {
    if r * r_prime <= 1.0 {
        return 0.0;
    }
    let gl = GaussLegendre::new(degree).expect("degree at least 2");
    // i dz∧dz̄ = 2 dx∧dy, and dx∧dy = Im τ ds∧dt
    let cell = gl.integrate(0.0, 1.0, |_s| gl.integrate(0.0, 1.0, |_t| 2.0 * shape.tau.im));
    // i dw∧dw̄/|w|² = 2 du∧dv/ρ² = 2 dρ∧dφ/ρ
    let annulus = gl.integrate(1.0 / r_prime, r, |rho| gl.integrate(0.0, TAU, |_phi| 2.0 / rho));
    cell * annulus
}

pub fn volume_bound(datum: &GluingDatum, r: f64, r_prime: f64, total_volume: Option<f64>) -> Result<VolumeReport> {
    if !(r >= 1.0 && r_prime >= 1.0) {
        return Err(Error::Domain(format!("need r >= 1 and r' >= 1, got {} and {}", r, r_prime)));
    }
    let shape = &datum.atlas.shape;
    let ci = curve_integral(shape);
    let volume = closed_form_volume(shape, r, r_prime);
    let quadrature = quadrature_volume(shape, r, r_prime, 32);
    let relative_error = if volume == 0.0 { quadrature.abs() } else { ((quadrature - volume) / volume).abs() };
    let log_sum = r.ln() + r_prime.ln();
    let bound = total_volume.map(|v| v / (4.0 * PI * ci));
    Ok(VolumeReport {
        r,
        r_prime,
        curve_integral: ci,
        volume,
        quadrature,
        relative_error,
        log_sum,
        bound,
        holds: bound.map(|b| log_sum <= b),
        convention: "sigma = dz ^ dw/w, volume = int sigma ^ conj(sigma) with the factor i^2 absorbed so it is positive".into(),
    })
}
