use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::qps::{exponent, wave, QpSeries};
use crate::error::{Error, Result};
use crate::torus_pic::{distance_to_trivial, FlatBundleClass, TorusShape};

/// Cover of the torus by horizontal annuli centered at heights jτ/K.
///
/// Chart j uses z_j = z − jτ/K. Consecutive bands meet in one strip,
/// and band K−1 meets band 0 across the seam z ↦ z − τ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandAtlas {
    pub shape: TorusShape,
    pub n_bands: usize,
    pub half_width: f64,
    pub inner_half_width: f64,
}

/// A 1-cochain entry on the strip between band `overlap` and the next band.
///
/// Forward entries are g_{j,j+1} in z_j; reversed entries are g_{j+1,j} in z_{j+1}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub overlap: usize,
    pub reversed: bool,
    pub data: QpSeries,
}

#[derive(Clone, Copy, Debug)]
pub struct DeltaOptions {
    pub divisor_floor: f64,
    pub tolerance: f64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        DeltaOptions { divisor_floor: 1e-12, tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSolution {
    pub charts: Vec<QpSeries>,
    /// Smallest normalized divisor |e^{2πib} − e^{2πi(m+a)τ}| / max(1, |e^{2πi(m+a)τ}|) met.
    pub min_divisor: f64,
    /// min_divisor / d(𝕀, class), logged only.
    pub divisor_ratio: f64,
}

impl BandAtlas {
    pub fn new(shape: &TorusShape, n_bands: usize) -> Result<Self> {
        if n_bands < 2 {
            return Err(Error::Precondition(format!("need at least 2 bands, got {}", n_bands)));
        }
        let s = shape.tau.im / n_bands as f64;
        Ok(BandAtlas { shape: *shape, n_bands, half_width: 0.75 * s, inner_half_width: 0.55 * s })
    }

    pub fn spacing(&self) -> f64 {
        self.shape.tau.im / self.n_bands as f64
    }

    pub fn n_overlaps(&self) -> usize {
        self.n_bands
    }

    /// Charts (j, k) joined by overlap o.
    pub fn ends(&self, o: usize) -> (usize, usize) {
        (o, (o + 1) % self.n_bands)
    }

    pub fn is_seam(&self, o: usize) -> bool {
        o + 1 == self.n_bands
    }

    /// z_k − z_j on every overlap.
    pub fn translation(&self) -> Complex64 {
        -self.shape.tau / self.n_bands as f64
    }

    /// t_jk of the class on overlap o, oriented from j to k.
    pub fn transition(&self, class: &FlatBundleClass, o: usize) -> Complex64 {
        if self.is_seam(o) {
            Complex64::from_polar(1.0, TAU * class.b.to_f64())
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// Heights bounding the strip of overlap o in z_j.
    pub fn overlap_lines(&self) -> [f64; 2] {
        [self.spacing() - self.half_width, self.half_width]
    }

    pub fn chart_lines(&self) -> [f64; 2] {
        [-self.half_width, self.half_width]
    }

    pub fn inner_lines(&self) -> [f64; 2] {
        [-self.inner_half_width, self.inner_half_width]
    }

    /// (δF)_jk = t_jk·F_k(z_j + A) − F_j(z_j) on each overlap.
    pub fn delta(&self, f: &[QpSeries]) -> Vec<QpSeries> {
        (0..self.n_overlaps())
            .map(|o| {
                let (j, k) = self.ends(o);
                let t = self.transition(&f[k].class, o);
                f[k].shift(self.translation()).scale(t).sub(&f[j])
            })
            .collect()
    }

    pub fn norm0(&self, f: &[QpSeries]) -> f64 {
        f.iter().map(|s| s.sup_on_lines(&self.chart_lines())).fold(0.0, f64::max)
    }

    pub fn inner_norm0(&self, f: &[QpSeries]) -> f64 {
        f.iter().map(|s| s.sup_on_lines(&self.inner_lines())).fold(0.0, f64::max)
    }

    pub fn norm1(&self, g: &[QpSeries]) -> f64 {
        g.iter().map(|s| s.sup_on_lines(&self.overlap_lines())).fold(0.0, f64::max)
    }
}

/// Rewrites a reversed entry g_kj(z_k) as the forward g_jk(z_j) = −t_jk·g_kj(z_j + A).
fn forward_of(atlas: &BandAtlas, class: &FlatBundleClass, e: &CochainEntry) -> QpSeries {
    if e.reversed {
        let t = atlas.transition(class, e.overlap);
        e.data.shift(atlas.translation()).scale(-t)
    } else {
        e.data.clone()
    }
}

/// Collects one forward cochain per overlap, checking both orientations agree.
pub fn assemble(entries: &[CochainEntry], class: &FlatBundleClass, atlas: &BandAtlas, tol: f64) -> Result<Vec<QpSeries>> {
    let mut out: Vec<Option<QpSeries>> = vec![None; atlas.n_overlaps()];
    for e in entries {
        if e.overlap >= atlas.n_overlaps() {
            return Err(Error::InvalidInput(format!("overlap index {} out of range", e.overlap)));
        }
        let g = forward_of(atlas, class, e);
        match &out[e.overlap] {
            None => out[e.overlap] = Some(g),
            Some(prev) => {
                let diff = prev.sub(&g);
                let scale = prev.max_coefficient().max(g.max_coefficient()).max(1.0);
                let residual = diff.max_coefficient() / scale;
                if residual > tol {
                    return Err(Error::IncompatibleCocycle { residual });
                }
            }
        }
    }
    Ok(out.into_iter().map(|g| g.unwrap_or_else(|| QpSeries::zero(class.clone()))).collect())
}

/// 1 − e^z without cancellation near z = 0.
fn one_minus_exp(z: Complex64) -> Complex64 {
    let em1 = z.re.exp_m1();
    let (s, c) = z.im.sin_cos();
    let half = (z.im / 2.0).sin();
    // e^z − 1 = (e^x − 1)cos y − 2 sin²(y/2) + i e^x sin y
    let expm1 = Complex64::new(em1 * c - 2.0 * half * half, (em1 + 1.0) * s);
    -expm1
}

/// Solves t_jk·F_k(z_j + A) − F_j = g_jk for F a section of `l^{-n}`.
pub fn solve_delta_bundle(
    entries: &[CochainEntry],
    l: &FlatBundleClass,
    n: i64,
    atlas: &BandAtlas,
    opts: DeltaOptions,
) -> Result<DeltaSolution> {
    let class = l.pow(-n);
    let g = assemble(entries, &class, atlas, opts.tolerance)?;
    solve_delta_forward(&g, &class, n, atlas, opts)
}

/// Per-mode solve of the δ-equation given forward data on every overlap.
pub fn solve_delta_forward(g: &[QpSeries], class: &FlatBundleClass, power: i64, atlas: &BandAtlas, opts: DeltaOptions) -> Result<DeltaSolution> {
    let kb = atlas.n_bands;
    let mut charts = vec![QpSeries::zero(class.clone()); kb];
    let mut modes: Vec<i64> = Vec::new();
    let mut data: Vec<QpSeries> = Vec::with_capacity(g.len());
    for gi in g {
        // align to this class's exponent convention
        let mut aligned = QpSeries::zero(class.clone());
        aligned.add_assign(gi);
        aligned.class = class.clone();
        modes.extend(aligned.modes.iter().filter(|(_, c)| c.norm() > 0.0).map(|(m, _)| *m));
        data.push(aligned);
    }
    modes.sort_unstable();
    modes.dedup();
    let tau = atlas.shape.tau;
    let beta = class.b.to_f64();
    let mut min_divisor = f64::INFINITY;
    for m in modes {
        let w = exponent(&class.a, m);
        let q = wave(w, atlas.translation());
        let coeff = |o: usize| data[o].modes.get(&m).copied().unwrap_or_default();
        // e^{2πi(ωτ − β)} = E/T
        let z = Complex64::new(0.0, TAU) * (tau * w - beta);
        // r/(1 − r), evaluated through e^{−z} when |r| > 1
        let (normalized, gain) = if z.re > 0.0 {
            let d = one_minus_exp(-z);
            (d.norm(), -d.inv())
        } else {
            let d = one_minus_exp(z);
            (d.norm(), z.exp() / d)
        };
        min_divisor = min_divisor.min(normalized);
        if normalized < opts.divisor_floor {
            return Err(Error::SmallDivisorUnderflow { power, mode: m, magnitude: normalized, floor: opts.divisor_floor });
        }
        let t = Complex64::from_polar(1.0, TAU * beta);
        // sweep in the direction that divides by the larger of q, 1/q
        if q.norm() >= 1.0 {
            // c_{j+1} = (c_j + g_j)/q, then T·q·c_0 − c_{K−1} = g_{K−1}
            let mut b = Complex64::new(0.0, 0.0);
            for o in 0..kb - 1 {
                b = (b + coeff(o)) / q;
            }
            let mut c = q.powi(kb as i32 - 1) * (coeff(kb - 1) + b) * gain;
            charts[0].modes.insert(m, c);
            for (o, chart) in charts.iter_mut().enumerate().skip(1) {
                c = (c + coeff(o - 1)) / q;
                chart.modes.insert(m, c);
            }
        } else {
            // c_j = q·c_{j+1} − g_j, then the seam fixes c_{K−1}
            let mut b = Complex64::new(0.0, 0.0);
            for o in (0..kb - 1).rev() {
                b = q * b - coeff(o);
            }
            let mut c = (coeff(kb - 1) - t * q * b) * gain;
            charts[kb - 1].modes.insert(m, c);
            for o in (0..kb - 1).rev() {
                c = q * c - coeff(o);
                charts[o].modes.insert(m, c);
            }
        }
    }
    let dist = distance_to_trivial(class);
    let divisor_ratio = if min_divisor.is_finite() && dist > 0.0 { min_divisor / dist } else { f64::NAN };
    Ok(DeltaSolution { charts, min_divisor, divisor_ratio })
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn round_trip(p in 1i64..500, q in 1i64..500, n in 1i64..6, kb in 2usize..6, coeffs in proptest::collection::vec(-1.0f64..1.0, 10)) {
            let l = FlatBundleClass::rational((p, 503), (q, 509));
            let atlas = BandAtlas::new(&TorusShape::new(Complex64::new(0.3, 1.1)).unwrap(), kb).unwrap();
            let class = l.pow(-n);
            let f0: Vec<QpSeries> = (0..kb)
                .map(|j| {
                    let mut s = QpSeries::zero(class.clone());
                    for m in -2..=2i64 {
                        let i = ((m + 2) as usize + j) % 5;
                        s.modes.insert(m, Complex64::new(coeffs[2 * i], coeffs[2 * i + 1]));
                    }
                    s
                })
                .collect();
            let g = atlas.delta(&f0);
            let entries: Vec<CochainEntry> = g.iter().cloned().enumerate().map(|(overlap, data)| CochainEntry { overlap, reversed: false, data }).collect();
            let sol = solve_delta_bundle(&entries, &l, n, &atlas, DeltaOptions::default()).unwrap();
            for (a, b) in sol.charts.iter().zip(&f0) {
                prop_assert!(a.sub(b).max_coefficient() < 1e-10 * (1.0 + b.max_coefficient()));
            }
        }
    }
}
