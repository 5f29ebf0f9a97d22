use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::projective::{chordal, cubic_fixed_points, fixed_locus, normalize, Point, ProjAut, TernaryForm, PROJ_TOL};
use crate::error::{Error, Result};

/// Bound on automorphisms of P² preserving a smooth cubic: ordered images of four inflection points.
pub const MAX_CUBIC_AUTOMORPHISMS: usize = 9 * 8 * 7 * 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// Chordal radii of U₁, …, U_n around the base points.
    pub radii: Vec<f64>,
    pub unconstrained: bool,
    pub count_within_bound: bool,
    /// Points of the cubic fixed by some non-identity automorphism.
    pub fixed_points_on_cubic: usize,
    pub samples_per_set: usize,
    pub violations: usize,
    pub metric: String,
}

/// Random point of the chordal ball of radius r around p.
fn sample_ball(p: &Point, r: f64, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let d: Point = std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let t: f64 = rng.gen_range(0.0..1.0);
        let scale = (r * t).min(0.999);
        let n = normalize(p);
        // move off p along a random direction, then reject points outside the ball
        let q: Point = std::array::from_fn(|i| n[i] + d[i] * scale);
        if chordal(&q, p) < r {
            return q;
        }
    }
}

/// Radii for neighbourhoods U_ν of the base points with ψ(U₁) ∩ U₁ = ∅ for ψ ≠ id and
/// U_ν ∩ ψ(U₁) = ∅ for ν ≥ 2 and every ψ.
///
/// A projective map moves chordal distances by at most σ₁σ₂/σ₃², which turns both conditions into
/// inequalities between base-point distances.
pub fn separation_scheme(auts: &[ProjAut], cubic: &TernaryForm, base_points: &[Point], samples: usize, seed: u64) -> Result<SeparationReport> {
    if base_points.is_empty() {
        return Err(Error::InvalidInput("no base points".into()));
    }
    let count_within_bound = auts.len() <= MAX_CUBIC_AUTOMORPHISMS;
    let metric = "chordal sin of the Fubini-Study angle".to_string();
    let non_identity: Vec<(usize, &ProjAut)> = auts.iter().enumerate().filter(|(_, a)| !a.is_identity()).collect();
    let p1 = base_points[0];
    for (idx, a) in &non_identity {
        if fixed_locus(a).iter().any(|s| s.distance(&p1) <= PROJ_TOL) {
            return Err(Error::BasePointFixed { aut_index: *idx });
        }
    }
    let mut fixed_points_on_cubic = 0;
    for (_, a) in &non_identity {
        let rep = cubic_fixed_points(a, cubic)?;
        fixed_points_on_cubic += rep.points.len();
    }
    if auts.is_empty() {
        return Ok(SeparationReport {
            radii: vec![1.0; base_points.len()],
            unconstrained: true,
            count_within_bound,
            fixed_points_on_cubic,
            samples_per_set: 0,
            violations: 0,
            metric,
        });
    }
    let images: Vec<(Point, f64, bool)> = auts.iter().map(|a| (a.apply(&p1), a.chordal_lipschitz(), a.is_identity())).collect();
    let mut r1 = f64::INFINITY;
    for (img, lip, id) in &images {
        if !id {
            r1 = r1.min(chordal(&p1, img) / (1.0 + lip));
        }
        for p in &base_points[1..] {
            let d = chordal(p, img);
            if d <= PROJ_TOL {
                return Err(Error::Precondition("a base point is the image of p₁".into()));
            }
            r1 = r1.min(d / lip);
        }
    }
    let r1 = 0.5 * r1.min(1.0);
    let mut radii = vec![r1];
    for p in &base_points[1..] {
        let r = images.iter().map(|(img, lip, _)| chordal(p, img) - lip * r1).fold(f64::INFINITY, f64::min);
        radii.push(0.5 * r.min(1.0));
    }
    // re-verify by sampling U₁ forward and each U_ν backward
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inverses: Vec<ProjAut> = auts.iter().map(ProjAut::inverse).collect();
    let mut violations = 0;
    for _ in 0..samples {
        let x = sample_ball(&p1, r1, &mut rng);
        for (a, (_, _, id)) in auts.iter().zip(&images) {
            let y = a.apply(&x);
            if !id && chordal(&y, &p1) < r1 {
                violations += 1;
            }
            for (p, r) in base_points[1..].iter().zip(&radii[1..]) {
                if chordal(&y, p) < *r {
                    violations += 1;
                }
            }
        }
    }
    for (p, r) in base_points[1..].iter().zip(&radii[1..]) {
        for _ in 0..samples {
            let x = sample_ball(p, *r, &mut rng);
            for inv in &inverses {
                if chordal(&inv.apply(&x), &p1) < r1 {
                    violations += 1;
                }
            }
        }
    }
    Ok(SeparationReport { radii, unconstrained: false, count_within_bound, fixed_points_on_cubic, samples_per_set: samples, violations, metric })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// Real points of the Fermat cubic [1 : −t : (t³ − 1)^{1/3}]-style, here [x : y : −(x³ + y³)^{1/3}].
    fn fermat_point(x: f64, y: f64) -> Point {
        let s: f64 = x * x * x + y * y * y;
        [c(x), c(y), c(-s.cbrt())]
    }

    fn base() -> Vec<Point> {
        (0..9).map(|k| fermat_point(1.0, 0.13 * k as f64 + 0.05)).collect()
    }

    #[test]
    fn single_reflection_separates() {
        let aut = ProjAut::integer([[1, 0, 0], [0, 1, 0], [0, 0, -1]]).unwrap();
        let pts = base();
        for p in &pts {
            assert!(TernaryForm::fermat().eval(p).norm() < 1e-12);
        }
        let rep = separation_scheme(&[aut], &TernaryForm::fermat(), &pts, 10_000, 7).unwrap();
        assert!(rep.radii.iter().all(|r| *r > 0.0));
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.fixed_points_on_cubic, 3);
    }

    #[test]
    fn base_point_on_fixed_line() {
        let aut = ProjAut::integer([[1, 0, 0], [0, 1, 0], [0, 0, -1]]).unwrap();
        let mut pts = base();
        pts[0] = [c(1.0), c(-1.0), c(0.0)];
        let err = separation_scheme(&[ProjAut::identity(), aut], &TernaryForm::fermat(), &pts, 10, 1).unwrap_err();
        assert_eq!(err, Error::BasePointFixed { aut_index: 1 });
    }

    #[test]
    fn empty_list_is_unconstrained() {
        let rep = separation_scheme(&[], &TernaryForm::fermat(), &base(), 10, 1).unwrap();
        assert!(rep.unconstrained);
        assert!(rep.count_within_bound);
        assert_eq!(MAX_CUBIC_AUTOMORPHISMS, 3024);
    }

    #[test]
    fn lipschitz_bound_holds() {
        let aut = ProjAut::integer([[2, 1, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        let lip = aut.chordal_lipschitz();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p: Point = std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let q = sample_ball(&p, 0.05, &mut rng);
            assert!(chordal(&aut.apply(&p), &aut.apply(&q)) <= lip * chordal(&p, &q) * (1.0 + 1e-12));
        }
    }
}
