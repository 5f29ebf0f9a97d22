use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::atlas::CoverAtlas;
use super::cocycle::FlatCocycle;
use crate::poly::{eval, taylor_shift};

/// Per-chart Taylor polynomials in the chart coordinate z_j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cochain0 {
    pub charts: Vec<Vec<Complex64>>,
}

/// Per-overlap polynomials in the coordinate z_j of the first chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cochain1 {
    pub overlaps: Vec<Vec<Complex64>>,
}

impl Cochain0 {
    pub fn constants(values: &[Complex64]) -> Self {
        Cochain0 { charts: values.iter().map(|v| vec![*v]).collect() }
    }
}

/// (δf)_jk = t_jk·f_k − f_j on each component of U_j ∩ U_k.
pub fn delta(f: &Cochain0, e: &FlatCocycle, atlas: &CoverAtlas) -> Cochain1 {
    assert_eq!(f.charts.len(), atlas.n_charts);
    let overlaps = atlas
        .overlaps
        .iter()
        .enumerate()
        .map(|(idx, o)| {
            let t = e.value(idx);
            let fk = taylor_shift(&f.charts[o.k], o.translation);
            let n = fk.len().max(f.charts[o.j].len());
            (0..n)
                .map(|i| t * fk.get(i).copied().unwrap_or_default() - f.charts[o.j].get(i).copied().unwrap_or_default())
                .collect()
        })
        .collect();
    Cochain1 { overlaps }
}

/// Sup of |p| on the disk |z| ≤ r, by the maximum principle on the boundary circle.
pub fn circle_max(p: &[Complex64], center: Complex64, r: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|i| eval(p, center + Complex64::from_polar(r, TAU * i as f64 / samples as f64)).norm())
        .fold(0.0, f64::max)
}

/// Sup of |p| on the lens {|z| ≤ r} ∩ {|z + a| ≤ r} via its two boundary arcs.
pub fn lens_max(p: &[Complex64], a: Complex64, r: f64, samples: usize) -> f64 {
    let mut best: f64 = 0.0;
    let slack = 1e-12 * r;
    for i in 0..samples {
        let u = Complex64::from_polar(r, TAU * i as f64 / samples as f64);
        if (u + a).norm() <= r + slack {
            best = best.max(eval(p, u).norm());
        }
        let v = u - a;
        if v.norm() <= r + slack {
            best = best.max(eval(p, v).norm());
        }
    }
    // corner points where the arcs meet
    let d = a.norm();
    if d > 0.0 && d < 2.0 * r {
        let mid = -a / 2.0;
        let h = (r * r - d * d / 4.0).sqrt();
        let perp = Complex64::new(-a.im, a.re) / d * h;
        best = best.max(eval(p, mid + perp).norm()).max(eval(p, mid - perp).norm());
    }
    best
}

/// Repeats `f(samples)` with doubled sampling until consecutive values agree within `rel`.
pub fn refined<F: Fn(usize) -> f64>(f: F, start: usize, rel: f64) -> f64 {
    let mut n = start;
    let mut prev = f(n);
    for _ in 0..8 {
        n *= 2;
        let next = f(n);
        if (next - prev).abs() <= rel * next.abs().max(1e-300) {
            return next;
        }
        prev = next;
    }
    prev
}

/// ‖f‖ = max_j sup_{U_j} |f_j|.
pub fn norm0(f: &Cochain0, atlas: &CoverAtlas) -> f64 {
    f.charts
        .iter()
        .map(|p| refined(|n| circle_max(p, Complex64::new(0.0, 0.0), atlas.outer_radius, n), 256, 0.01))
        .fold(0.0, f64::max)
}

/// ‖g‖ = max over components of sup_{U_jk} |g_jk|.
pub fn norm1(g: &Cochain1, atlas: &CoverAtlas) -> f64 {
    g.overlaps
        .iter()
        .zip(&atlas.overlaps)
        .map(|(p, o)| refined(|n| lens_max(p, o.translation, atlas.outer_radius, n), 256, 0.01))
        .fold(0.0, f64::max)
}

/// Sup of each chart function over the inner disk U_j*.
pub fn inner_norm0(f: &Cochain0, atlas: &CoverAtlas) -> f64 {
    f.charts
        .iter()
        .map(|p| refined(|n| circle_max(p, Complex64::new(0.0, 0.0), atlas.inner_radius, n), 256, 0.01))
        .fold(0.0, f64::max)
}
