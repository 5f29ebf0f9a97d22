use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{GluingDatum, LeviFlatLevel};
use crate::error::{Error, Result};
use crate::exact::{frac_f64, Coord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub r: f64,
    pub epsilon: f64,
    pub n_iter: usize,
    /// Rotation number of the simulated holonomy generator.
    pub rotation: f64,
    /// Order of the holonomy group when it is finite and fits in u64.
    pub finite_orbit: Option<u64>,
    /// First N at which every point of the transversal circle is within ε of the orbit.
    pub density_n: Option<usize>,
    pub final_max_gap: f64,
    /// (N, D*_N) at powers of two.
    pub discrepancy: Vec<(usize, f64)>,
    /// Least-squares slope of log D*_N against log N.
    pub slope: f64,
    /// max N·D*_N over the checkpoints.
    pub c_constant: f64,
}

fn fraction(c: &Coord) -> Option<(BigInt, BigInt)> {
    match c {
        Coord::Exact(q) => Some((q.numer().clone(), q.denom().clone())),
        Coord::Float(_) => None,
    }
}

/// Order of the subgroup of ℝ/ℤ generated by two rationals, with a generator of that order.
fn rational_holonomy(a: &Coord, b: &Coord) -> Option<(BigInt, f64)> {
    let (pa, qa) = fraction(a)?;
    let (pb, qb) = fraction(b)?;
    let q = qa.lcm(&qb);
    let g = (&pa * (&q / &qa)).gcd(&(&pb * (&q / &qb))).gcd(&q);
    let order = &q / &g;
    let rotation = if qa == order {
        a.to_f64()
    } else if qb == order {
        b.to_f64()
    } else {
        (g.to_f64().unwrap() / q.to_f64().unwrap()).fract()
    };
    Some((order, rotation))
}

/// Star discrepancy of a point set in [0, 1).
pub fn star_discrepancy(points: &[f64]) -> f64 {
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max)
}

/// Circle points with their gaps, updated one insertion at a time.
struct Gaps {
    points: BTreeSet<u64>,
    gaps: BTreeMap<u64, usize>,
}

const SCALE: f64 = (1u64 << 52) as f64;

impl Gaps {
    fn new() -> Self {
        Gaps { points: BTreeSet::new(), gaps: BTreeMap::new() }
    }

    fn gap(a: u64, b: u64) -> u64 {
        if b > a { b - a } else { (1u64 << 52) - a + b }
    }

    fn bump(&mut self, g: u64, delta: i64) {
        let e = self.gaps.entry(g).or_insert(0);
        *e = (*e as i64 + delta) as usize;
        if *e == 0 {
            self.gaps.remove(&g);
        }
    }

    fn insert(&mut self, x: f64) {
        let p = ((x * SCALE) as u64).min((1u64 << 52) - 1);
        if !self.points.insert(p) {
            return;
        }
        if self.points.len() == 1 {
            self.bump(1u64 << 52, 1);
            return;
        }
        let prev = self.points.range(..p).next_back().or_else(|| self.points.iter().next_back()).copied().unwrap();
        let next = self.points.range(p + 1..).next().or_else(|| self.points.iter().next()).copied().unwrap();
        self.bump(Self::gap(prev, next), -1);
        self.bump(Self::gap(prev, p), 1);
        self.bump(Self::gap(p, next), 1);
    }

    fn max_gap(&self) -> f64 {
        self.gaps.keys().next_back().map_or(1.0, |g| *g as f64 / SCALE)
    }
}

/// Simulates the holonomy of a leaf of {|w| = r} on the transversal circle arg w / 2π.
///
/// Going once around the loop 1 rotates arg w by 2πa and around τ by 2πb; the orbit of a point is the
/// orbit of the group these rotations generate.
pub fn leaf_density(level: &LeviFlatLevel, datum: &GluingDatum, n_iter: usize, epsilon: f64) -> Result<DensityReport> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {}", epsilon)));
    }
    let class = &datum.class;
    let (finite, rotation) = match rational_holonomy(&class.a, &class.b) {
        Some((order, rotation)) => (Some(order), rotation),
        None => (None, if class.a.dist_to_integer().is_zero() { class.b.to_f64() } else { class.a.to_f64() }),
    };
    let theta0 = 0.0;
    let mut gaps = Gaps::new();
    let mut points = Vec::with_capacity(n_iter);
    let mut density_n = None;
    let mut discrepancy = Vec::new();
    let mut checkpoint = 1;
    for n in 0..n_iter {
        let x = frac_f64(theta0 + n as f64 * rotation);
        points.push(x);
        gaps.insert(x);
        if density_n.is_none() && gaps.max_gap() <= 2.0 * epsilon {
            density_n = Some(n + 1);
        }
        if n + 1 == checkpoint {
            discrepancy.push((n + 1, star_discrepancy(&points)));
            checkpoint *= 2;
        }
    }
    let fit: Vec<(f64, f64)> = discrepancy.iter().filter(|(n, d)| *n >= 8 && *d > 0.0).map(|(n, d)| ((*n as f64).ln(), d.ln())).collect();
    let slope = if fit.len() >= 2 {
        let k = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / k;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    let c_constant = discrepancy.iter().map(|(n, d)| *n as f64 * d).fold(0.0, f64::max);
    let finite_orbit = finite.and_then(|o| o.to_u64());
    Ok(DensityReport {
        r: level.r,
        epsilon,
        n_iter,
        rotation,
        finite_orbit,
        density_n,
        final_max_gap: gaps.max_gap(),
        discrepancy,
        slope,
        c_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_pic::{FlatBundleClass, TorusShape};
    use num_complex::Complex64;

    fn setup(class: FlatBundleClass) -> (LeviFlatLevel, GluingDatum) {
        let d = GluingDatum::new(&TorusShape::square(), 9, &class, 2.0, 2.0, Complex64::new(0.0, 0.0)).unwrap();
        (LeviFlatLevel::new(1.0, &d).unwrap(), d)
    }

    #[test]
    fn golden_orbit_is_dense() {
        let (l, d) = setup(FlatBundleClass::golden_mean());
        let rep = leaf_density(&l, &d, 4096, 0.01).unwrap();
        let n = rep.density_n.unwrap();
        assert!(n < 200, "{}", n);
        assert!(rep.slope < -0.8, "{}", rep.slope);
        assert!(rep.c_constant < 4.0, "{}", rep.c_constant);
    }

    #[test]
    fn torsion_orbit_is_finite() {
        let (l, d) = setup(FlatBundleClass::rational((1, 5), (2, 3)));
        let rep = leaf_density(&l, &d, 1000, 0.01).unwrap();
        assert_eq!(rep.finite_orbit, Some(15));
        assert!(rep.density_n.is_none());
        assert!((rep.final_max_gap - 1.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn large_epsilon_needs_one_point() {
        let (l, d) = setup(FlatBundleClass::golden_mean());
        assert_eq!(leaf_density(&l, &d, 10, 0.5).unwrap().density_n, Some(1));
        assert_eq!(leaf_density(&l, &d, 10, 3.0).unwrap().density_n, Some(1));
    }

    #[test]
    fn discrepancy_oracle() {
        assert!((star_discrepancy(&[0.5]) - 0.5).abs() < 1e-15);
        let pts: Vec<f64> = (0..10).map(|i| (i as f64 + 0.5) / 10.0).collect();
        assert!((star_discrepancy(&pts) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn incremental_gaps_match_sort() {
        let mut g = Gaps::new();
        let mut xs = Vec::new();
        for n in 0..200 {
            let x = frac_f64(n as f64 * 0.7548776662466927);
            g.insert(x);
            xs.push(x);
            let mut s = xs.clone();
            s.sort_by(f64::total_cmp);
            let mut worst = 1.0 - s[s.len() - 1] + s[0];
            for w in s.windows(2) {
                worst = f64::max(worst, w[1] - w[0]);
            }
            assert!((g.max_gap() - worst).abs() < 1e-12);
        }
    }
}
