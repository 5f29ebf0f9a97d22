use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bands::{solve_delta_forward, BandAtlas, DeltaOptions};
use super::qps::QpSeries;
use crate::error::{Error, Result};
use crate::poly::{compose, revert};
use crate::torus_pic::FlatBundleClass;

/// Transitions t_jk·w_k = w_j + Σ_{μ≥2} p_{o,μ}(z_j)·w_j^μ on each overlap o.
///
/// `class` is the class of the linear part t; p_{o,μ} is a section of class^{1−μ}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchroderInput {
    pub class: FlatBundleClass,
    /// perturbation[o][μ − 2] = p_{o,μ}.
    pub perturbation: Vec<Vec<QpSeries>>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub mode_cap: i64,
    pub delta: DeltaOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { mode_cap: 16, delta: DeltaOptions::default() }
    }
}

/// charts[j][ν] is the coefficient of order ν in chart j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticalSeries {
    pub class: FlatBundleClass,
    pub truncation_order: usize,
    pub charts: Vec<Vec<QpSeries>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderDiagnostics {
    pub order: usize,
    pub power: i64,
    pub min_divisor: f64,
    pub divisor_ratio: f64,
    pub dropped_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchroderSolution {
    pub series: VerticalSeries,
    pub diagnostics: Vec<OrderDiagnostics>,
}

/// Power series in one variable with section-valued coefficients.
pub(crate) type Ser = Vec<QpSeries>;

pub(crate) fn ser_zero(len: usize) -> Ser {
    vec![QpSeries::zero(FlatBundleClass::trivial()); len]
}

pub(crate) fn ser_mul(a: &Ser, b: &Ser, len: usize, cap: i64, dropped: &mut usize) -> Ser {
    let mut out = ser_zero(len);
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if y.is_zero() {
                continue;
            }
            let (p, d) = x.mul(y, cap);
            *dropped += d;
            out[i + j].add_assign(&p);
        }
    }
    out
}

fn check_class(s: &QpSeries, want: &FlatBundleClass, what: &str) -> Result<()> {
    if s.is_zero() || s.same_bundle(want) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{} has class {:?}, expected {:?}", what, s.class, want)))
    }
}

impl SchroderInput {
    pub fn validate(&self, atlas: &BandAtlas) -> Result<()> {
        if self.perturbation.len() != atlas.n_overlaps() {
            return Err(Error::InvalidInput(format!("{} overlaps expected, got {}", atlas.n_overlaps(), self.perturbation.len())));
        }
        for (o, ps) in self.perturbation.iter().enumerate() {
            for (i, p) in ps.iter().enumerate() {
                let mu = i as i64 + 2;
                check_class(p, &self.class.pow(1 - mu), &format!("p[{}][{}]", o, mu))?;
            }
        }
        Ok(())
    }

    /// p_{o,μ} or zero.
    pub fn coefficient(&self, o: usize, mu: usize) -> QpSeries {
        self.perturbation[o].get(mu - 2).cloned().unwrap_or_else(|| QpSeries::zero(self.class.pow(1 - mu as i64)))
    }

    /// Largest sup|p_{o,μ}|^{1/(μ−1)} over overlap strips.
    pub fn grid_sup(&self, atlas: &BandAtlas) -> f64 {
        let mut best: f64 = 0.0;
        for ps in &self.perturbation {
            for (i, p) in ps.iter().enumerate() {
                let s = p.sup_on_lines(&atlas.overlap_lines());
                best = best.max(s.powf(1.0 / (i as f64 + 1.0)));
            }
        }
        best
    }
}

/// Solves for w_j = u_j + Σ_{ν≥2} f_{j|ν}(z_j)·u_j^ν with t_jk·u_k = u_j.
pub fn schroder_solve(input: &SchroderInput, atlas: &BandAtlas, order: usize, opts: SolverOptions) -> Result<SchroderSolution> {
    if order < 2 {
        return Err(Error::Precondition(format!("order must be at least 2, got {}", order)));
    }
    input.validate(atlas)?;
    let c = &input.class;
    let kb = atlas.n_bands;
    let mut charts: Vec<Ser> = (0..kb)
        .map(|_| {
            let mut s = ser_zero(order + 1);
            s[0] = QpSeries::zero(FlatBundleClass::trivial());
            s[1] = QpSeries::one();
            s
        })
        .collect();
    let mut diagnostics = Vec::new();
    for nu in 2..=order {
        let class = c.pow(1 - nu as i64);
        let mut dropped = 0;
        let mut rhs = Vec::with_capacity(atlas.n_overlaps());
        for o in 0..atlas.n_overlaps() {
            let (j, _) = atlas.ends(o);
            let phi: Ser = charts[j][..nu].to_vec();
            let mut power = phi.clone();
            let mut r = QpSeries::zero(class.clone());
            for mu in 2..=nu {
                power = ser_mul(&power, &phi, nu + 1, opts.mode_cap, &mut dropped);
                let p = input.coefficient(o, mu);
                if p.is_zero() || power[nu].is_zero() {
                    continue;
                }
                let (term, d) = p.mul(&power[nu], opts.mode_cap);
                dropped += d;
                r.add_assign(&term);
            }
            rhs.push(r);
        }
        let sol = solve_delta_forward(&rhs, &class, nu as i64 - 1, atlas, opts.delta)?;
        for (j, f) in sol.charts.into_iter().enumerate() {
            charts[j][nu] = f;
        }
        diagnostics.push(OrderDiagnostics {
            order: nu,
            power: nu as i64 - 1,
            min_divisor: sol.min_divisor,
            divisor_ratio: sol.divisor_ratio,
            dropped_terms: dropped,
        });
    }
    Ok(SchroderSolution { series: VerticalSeries { class: c.clone(), truncation_order: order, charts }, diagnostics })
}

/// Numeric coefficients of a vertical series at a point of chart j.
pub(crate) fn numeric(series: &[QpSeries], z: Complex64) -> Vec<Complex64> {
    series.iter().map(|s| s.eval(z)).collect()
}

/// Worst |[w^ν](t_jk·u_k − u_j)| over ν ≤ order, relative to the same expansion with absolute coefficients.
///
/// u_j is obtained by inverting w_j = φ_j(u_j) as a numeric series at each point.
pub fn substitution_residual(sol: &SchroderSolution, input: &SchroderInput, atlas: &BandAtlas, samples: usize) -> Vec<f64> {
    let order = sol.series.truncation_order;
    let len = order + 1;
    let [y0, y1] = atlas.overlap_lines();
    let mut worst = vec![0.0f64; len];
    let one = Complex64::new(1.0, 0.0);
    // majorizing series with every coefficient replaced by its modulus
    let major = |phi: &[Complex64]| -> Vec<Complex64> {
        let m: Vec<Complex64> = phi.iter().enumerate().map(|(i, c)| if i < 2 { *c } else { -Complex64::new(c.norm(), 0.0) }).collect();
        revert(&m, len)
    };
    let abs = |v: &[Complex64]| -> Vec<Complex64> { v.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect() };
    for o in 0..atlas.n_overlaps() {
        let (j, k) = atlas.ends(o);
        let t = atlas.transition(&input.class, o);
        for sx in 0..samples {
            for sy in 0..3 {
                let z = Complex64::new(sx as f64 / samples as f64, y0 + (y1 - y0) * (sy as f64 + 0.5) / 3.0);
                let zk = z + atlas.translation();
                let phi_j = numeric(&sol.series.charts[j], z);
                let uj = revert(&phi_j, len);
                let phi_k = numeric(&sol.series.charts[k], zk);
                let mut wk = vec![Complex64::new(0.0, 0.0); len];
                wk[1] = one;
                for mu in 2..len {
                    wk[mu] = input.coefficient(o, mu).eval(z);
                }
                let wk: Vec<Complex64> = wk.iter().map(|c| c / t).collect();
                let uk = compose(&revert(&phi_k, len), &wk, len);
                let scale_k = compose(&major(&phi_k), &abs(&wk), len);
                let scale_j = major(&phi_j);
                for nu in 0..len {
                    let res = t * uk[nu] - uj[nu];
                    let denom = 1.0 + scale_k[nu].norm().max(scale_j[nu].norm());
                    worst[nu] = worst[nu].max(res.norm() / denom);
                }
            }
        }
    }
    worst
}

/// Random p_{o,μ} for 2 ≤ μ ≤ max_mu on modes −1, 0, 1 with size ε^{μ−1}.
pub fn synthetic_perturbation(class: &FlatBundleClass, atlas: &BandAtlas, max_mu: usize, eps: f64, seed: u64) -> SchroderInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perturbation = (0..atlas.n_overlaps())
        .map(|_| {
            (2..=max_mu)
                .map(|mu| {
                    let mut s = QpSeries::zero(class.pow(1 - mu as i64));
                    let size = eps.powi(mu as i32 - 1);
                    for m in -1..=1 {
                        s.modes.insert(m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * size);
                    }
                    s
                })
                .collect()
        })
        .collect();
    SchroderInput { class: class.clone(), perturbation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearizer::bands::CochainEntry;
    use crate::linearizer::solve_delta_bundle;
    use crate::torus_pic::TorusShape;

    #[test]
    fn linear_transitions_stay_linear() {
        let atlas = BandAtlas::new(&TorusShape::square(), 3).unwrap();
        let c = FlatBundleClass::golden_mean();
        let input = SchroderInput { class: c.clone(), perturbation: vec![vec![]; 3] };
        let sol = schroder_solve(&input, &atlas, 8, SolverOptions::default()).unwrap();
        for chart in &sol.series.charts {
            assert!(chart[2..].iter().all(|f| f.is_zero()));
        }
    }

    #[test]
    fn quadratic_constant_matches_one_step() {
        // class (0, b): constants are sections of every power
        let atlas = BandAtlas::new(&TorusShape::square(), 3).unwrap();
        let c = FlatBundleClass::new(crate::Coord::zero(), FlatBundleClass::golden_mean().a);
        let eps = Complex64::new(0.05, 0.0);
        let p = QpSeries::single(c.pow(-1), 0, eps);
        let input = SchroderInput { class: c.clone(), perturbation: vec![vec![p.clone()]; 3] };
        let sol = schroder_solve(&input, &atlas, 2, SolverOptions::default()).unwrap();
        let entries: Vec<CochainEntry> = (0..3).map(|o| CochainEntry { overlap: o, reversed: false, data: p.clone() }).collect();
        let direct = solve_delta_bundle(&entries, &c, 1, &atlas, DeltaOptions::default()).unwrap();
        // hand recursion: t^{-1} f_k − f_j = ε on each overlap, constant mode only
        let t = atlas.transition(&c, 2).inv();
        let f0 = eps * 3.0 / (t - 1.0);
        for j in 0..3 {
            assert!(sol.series.charts[j][2].sub(&direct.charts[j]).max_coefficient() < 1e-14);
        }
        let f = |j: usize| sol.series.charts[j][2].modes[&0];
        assert!((f(1) - f(0) - eps).norm() < 1e-12);
        assert!((f(2) - f(1) - eps).norm() < 1e-12);
        assert!((t * f(0) - f(2) - eps).norm() < 1e-12);
        assert!((f(0) - f0).norm() < 1e-12);
    }

    #[test]
    fn golden_order_twelve_residual() {
        let atlas = BandAtlas::new(&TorusShape::square(), 3).unwrap();
        let c = FlatBundleClass::golden_mean();
        let input = synthetic_perturbation(&c, &atlas, 3, 0.1, 7);
        let sol = schroder_solve(&input, &atlas, 12, SolverOptions::default()).unwrap();
        let res = substitution_residual(&sol, &input, &atlas, 8);
        assert!(res.iter().all(|r| *r < 1e-10), "{:?}", res);
        assert!(sol.diagnostics.iter().all(|d| d.dropped_terms == 0));
    }

    #[test]
    fn majorant_dominates_solution() {
        let atlas = BandAtlas::new(&TorusShape::square(), 3).unwrap();
        let c = FlatBundleClass::golden_mean();
        let input = synthetic_perturbation(&c, &atlas, 3, 0.1, 7);
        let sol = schroder_solve(&input, &atlas, 12, SolverOptions::default()).unwrap();
        let rep = crate::linearizer::schroder_domination(&sol, &input, &atlas, 9).unwrap();
        assert!(rep.holds, "{:?}", rep.rows);
        assert!(rep.m >= 2.0 * rep.q && rep.q >= 1.0);
    }

    #[test]
    fn wrong_class_rejected() {
        let atlas = BandAtlas::new(&TorusShape::square(), 2).unwrap();
        let c = FlatBundleClass::parse("1/3", "1/7").unwrap();
        let p = QpSeries::single(c.clone(), 0, Complex64::new(1.0, 0.0));
        let input = SchroderInput { class: c, perturbation: vec![vec![p]; 2] };
        assert!(matches!(schroder_solve(&input, &atlas, 3, SolverOptions::default()), Err(Error::InvalidInput(_))));
    }
}
