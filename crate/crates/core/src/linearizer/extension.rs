use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bands::{solve_delta_forward, BandAtlas};
use super::qps::QpSeries;
use super::schroder::{ser_mul, ser_zero, OrderDiagnostics, Ser, SolverOptions, VerticalSeries};
use crate::error::{Error, Result};
use crate::torus_pic::FlatBundleClass;

/// ζ_k = A + ζ_j + Σ_{ν≥1} f^{(ν)}_o(ζ_j)·w_j^ν with linear fibre transitions t_jk·w_k = w_j.
///
/// f^{(ν)}_o is a section of class^{−ν}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionInput {
    pub class: FlatBundleClass,
    /// coefficients[o][ν − 1] = f^{(ν)}_o.
    pub coefficients: Vec<Vec<QpSeries>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSolution {
    /// charts[j][ν] = F_j^{(ν)}, entry 0 unused.
    pub series: VerticalSeries,
    pub diagnostics: Vec<OrderDiagnostics>,
}

impl ExtensionInput {
    pub fn coefficient(&self, o: usize, nu: usize) -> QpSeries {
        self.coefficients[o].get(nu - 1).cloned().unwrap_or_else(|| QpSeries::zero(self.class.pow(-(nu as i64))))
    }

    pub fn validate(&self, atlas: &BandAtlas) -> Result<()> {
        if self.coefficients.len() != atlas.n_overlaps() {
            return Err(Error::InvalidInput(format!("{} overlaps expected, got {}", atlas.n_overlaps(), self.coefficients.len())));
        }
        for (o, fs) in self.coefficients.iter().enumerate() {
            for (i, f) in fs.iter().enumerate() {
                let want = self.class.pow(-(i as i64 + 1));
                if !f.is_zero() && !f.same_bundle(&want) {
                    return Err(Error::InvalidInput(format!("f[{}][{}] has class {:?}, expected {:?}", o, i + 1, f.class, want)));
                }
            }
        }
        Ok(())
    }

    pub fn grid_sup(&self, atlas: &BandAtlas) -> f64 {
        self.coefficients
            .iter()
            .flatten()
            .map(|f| f.sup_on_lines(&atlas.overlap_lines()))
            .fold(0.0, f64::max)
    }
}

/// Solves for ζ_j = u_j + Σ_{ν≥1} F_j^{(ν)}(ζ_j)·w_j^ν with u_k − u_j = A + O(w^{order+1}).
pub fn extension_solve(input: &ExtensionInput, atlas: &BandAtlas, order: usize, opts: SolverOptions) -> Result<ExtensionSolution> {
    if order < 1 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    input.validate(atlas)?;
    let c = &input.class;
    let kb = atlas.n_bands;
    let mut charts: Vec<Ser> = vec![ser_zero(order + 1); kb];
    let mut diagnostics = Vec::new();
    for n in 1..=order {
        let class = c.pow(-(n as i64));
        let mut dropped = 0;
        let mut rhs = Vec::with_capacity(atlas.n_overlaps());
        for o in 0..atlas.n_overlaps() {
            let (_, k) = atlas.ends(o);
            let t = atlas.transition(c, o);
            // δ(w) = Σ_{μ<n} f^{(μ)} w^μ and its powers
            let mut delta = ser_zero(n);
            for mu in 1..n {
                delta[mu] = input.coefficient(o, mu);
            }
            let mut powers: Vec<Ser> = vec![delta.clone()];
            for _ in 2..n {
                let next = ser_mul(powers.last().unwrap(), &delta, n, opts.mode_cap, &mut dropped);
                powers.push(next);
            }
            // h = Σ_{ν<n} t^{−ν} Σ_{r≥1} G_ν^{(r)}/r! · [w^{n−ν}] δ^r, G_ν = F_k^{(ν)}(ζ_j + A)
            let mut h = QpSeries::zero(class.clone());
            for nu in 1..n {
                let mut deriv = charts[k][nu].shift(atlas.translation());
                let mut factorial = 1.0;
                let tn = t.powi(-(nu as i32));
                for r in 1..=(n - nu) {
                    deriv = deriv.derivative();
                    factorial *= r as f64;
                    let dr = &powers[r - 1][n - nu];
                    if dr.is_zero() || deriv.is_zero() {
                        continue;
                    }
                    let (term, d) = deriv.mul(dr, opts.mode_cap);
                    dropped += d;
                    h.add_assign(&term.scale(tn / factorial));
                }
            }
            rhs.push(input.coefficient(o, n).sub(&h));
        }
        let sol = solve_delta_forward(&rhs, &class, n as i64, atlas, opts.delta)?;
        for (j, f) in sol.charts.into_iter().enumerate() {
            charts[j][n] = f;
        }
        diagnostics.push(OrderDiagnostics {
            order: n,
            power: n as i64,
            min_divisor: sol.min_divisor,
            divisor_ratio: sol.divisor_ratio,
            dropped_terms: dropped,
        });
    }
    Ok(ExtensionSolution { series: VerticalSeries { class: c.clone(), truncation_order: order, charts }, diagnostics })
}

/// Worst |[w^ν](u_k − u_j − A)| for ν ≤ order, by contour integrals of direct evaluations.
pub fn extension_residual(sol: &ExtensionSolution, input: &ExtensionInput, atlas: &BandAtlas, samples: usize, radius: f64) -> Vec<f64> {
    let order = sol.series.truncation_order;
    let a = atlas.translation();
    let [y0, y1] = atlas.overlap_lines();
    let contour = 64;
    let mut worst = vec![0.0f64; order + 1];
    for o in 0..atlas.n_overlaps() {
        let (j, k) = atlas.ends(o);
        let t = atlas.transition(&input.class, o);
        for sx in 0..samples {
            for sy in 0..3 {
                let z = Complex64::new(sx as f64 / samples as f64, y0 + (y1 - y0) * (sy as f64 + 0.5) / 3.0);
                let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
                for p in 0..contour {
                    let theta = TAU * p as f64 / contour as f64;
                    let w = Complex64::from_polar(radius, theta);
                    let mut zk = a + z;
                    for nu in 1..=input.coefficients[o].len() {
                        zk += input.coefficient(o, nu).eval(z) * w.powi(nu as i32);
                    }
                    let wk = w / t;
                    let mut uk = zk;
                    let mut uj = z;
                    for nu in 1..=order {
                        uk -= sol.series.charts[k][nu].eval(zk) * wk.powi(nu as i32);
                        uj -= sol.series.charts[j][nu].eval(z) * w.powi(nu as i32);
                    }
                    let r = uk - uj - a;
                    for (nu, c) in coeffs.iter_mut().enumerate() {
                        *c += r * Complex64::from_polar(1.0, -theta * nu as f64);
                    }
                }
                for (nu, c) in coeffs.iter().enumerate() {
                    let v = c.norm() / contour as f64 / radius.powi(nu as i32);
                    worst[nu] = worst[nu].max(v);
                }
            }
        }
    }
    worst
}

/// Random f^{(ν)}_o for ν ≤ order on modes −1, 0, 1 with size ε^ν.
pub fn synthetic_extension(class: &FlatBundleClass, atlas: &BandAtlas, order: usize, eps: f64, seed: u64) -> ExtensionInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = (0..atlas.n_overlaps())
        .map(|_| {
            (1..=order)
                .map(|nu| {
                    let mut s = QpSeries::zero(class.pow(-(nu as i64)));
                    let size = eps.powi(nu as i32);
                    for m in -1..=1 {
                        s.modes.insert(m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * size);
                    }
                    s
                })
                .collect()
        })
        .collect();
    ExtensionInput { class: class.clone(), coefficients }
}
