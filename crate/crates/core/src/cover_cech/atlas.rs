use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus_pic::TorusShape;

/// One connected component of U_j ∩ U_k, indexed by the lattice shift λ = p + qτ.
///
/// On it z_k = z_j + translation, with translation = c_j − c_k − λ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub j: usize,
    pub k: usize,
    pub lattice_shift: (i64, i64),
    pub translation: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverAtlas {
    pub shape: TorusShape,
    pub n_charts: usize,
    pub centers: Vec<Complex64>,
    pub outer_radius: f64,
    pub inner_radius: f64,
    pub overlaps: Vec<Overlap>,
    /// Grid parameters (m, k, shear): centers i/m + l·(τ + shear/m)/k.
    pub grid: (usize, usize, usize),
}

#[derive(Clone, Copy, Debug)]
pub struct CoverOptions {
    pub target_ratio: f64,
    pub max_ratio: f64,
    pub inner_margin: f64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { target_ratio: 0.5, max_ratio: 0.97, inner_margin: 1.02 }
    }
}

impl CoverAtlas {
    pub fn ratio(&self) -> f64 {
        self.inner_radius / self.outer_radius
    }

    pub fn lattice_point(&self, p: i64, q: i64) -> Complex64 {
        Complex64::new(p as f64, 0.0) + self.shape.tau * q as f64
    }

    /// Reduces a plane point to the fundamental parallelogram.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let (a, b) = lattice_coords(&self.shape, z);
        self.shape.point(a - a.floor(), b - b.floor())
    }

    /// Overlaps touching chart j, with their indices.
    pub fn incident(&self, j: usize) -> impl Iterator<Item = (usize, &Overlap)> {
        self.overlaps.iter().enumerate().filter(move |(_, o)| o.j == j || o.k == j)
    }

    /// Minimum over charts of the distance from z to the nearest lift of a center.
    pub fn distance_to_centers(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for c in &self.centers {
            for p in -2..=2 {
                for q in -2..=2 {
                    best = best.min((z - c - self.lattice_point(p, q)).norm());
                }
            }
        }
        best
    }
}

/// Real coordinates (a, b) with z = a + bτ.
pub fn lattice_coords(shape: &TorusShape, z: Complex64) -> (f64, f64) {
    let b = z.im / shape.tau.im;
    let a = z.re - b * shape.tau.re;
    (a, b)
}

/// Lagrange-reduced basis of the lattice spanned by u and v.
fn reduce_basis(mut u: Complex64, mut v: Complex64) -> (Complex64, Complex64) {
    if u.norm_sqr() > v.norm_sqr() {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let mu = ((v * u.conj()).re / u.norm_sqr()).round();
        v -= u * mu;
        if v.norm_sqr() >= u.norm_sqr() {
            return (u, v);
        }
        std::mem::swap(&mut u, &mut v);
    }
}

fn circumradius(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let (x, y, z) = ((b - c).norm(), (a - c).norm(), (a - b).norm());
    let area2 = ((b - a).re * (c - a).im - (b - a).im * (c - a).re).abs();
    x * y * z / (2.0 * area2)
}

/// Covering radius of the lattice ⟨u, v⟩.
pub fn covering_radius(u: Complex64, v: Complex64) -> f64 {
    let (u, v) = reduce_basis(u, v);
    let zero = Complex64::new(0.0, 0.0);
    if (v - u).norm() <= (v + u).norm() {
        circumradius(zero, u, v)
    } else {
        circumradius(zero, u, u + v)
    }
}

/// Smallest radius of a disk containing the three points.
pub fn enclosing_radius(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let sides = [(b - c).norm(), (a - c).norm(), (a - b).norm()];
    let longest = sides.iter().cloned().fold(0.0, f64::max);
    let sq: f64 = sides.iter().map(|s| s * s).sum();
    if 2.0 * longest * longest >= sq {
        longest / 2.0
    } else {
        circumradius(a, b, c)
    }
}

struct Candidate {
    grid: (usize, usize, usize),
    cov: f64,
    inner: f64,
    outer: f64,
}

impl Candidate {
    fn ratio(&self) -> f64 {
        self.inner / self.outer
    }
}

pub fn build_cover(shape: &TorusShape, n_charts: usize) -> Result<CoverAtlas> {
    build_cover_with(shape, n_charts, CoverOptions::default())
}

pub fn build_cover_with(shape: &TorusShape, n_charts: usize, opts: CoverOptions) -> Result<CoverAtlas> {
    if n_charts < 4 {
        return Err(Error::Precondition(format!("need at least 4 charts, got {}", n_charts)));
    }
    let one = Complex64::new(1.0, 0.0);
    let (short, _) = reduce_basis(one, shape.tau);
    let max_outer = 0.49 * short.norm();
    let mut best: Option<Candidate> = None;
    for m in 1..=n_charts {
        if n_charts % m != 0 {
            continue;
        }
        let k = n_charts / m;
        for shear in 0..k {
            let w1 = Complex64::new(1.0 / m as f64, 0.0);
            let w2 = (shape.tau + shear as f64 / m as f64) / k as f64;
            let cov = covering_radius(w1, w2);
            let inner = opts.inner_margin * cov;
            let outer = (inner / opts.target_ratio).min(max_outer);
            if outer <= inner {
                continue;
            }
            let cand = Candidate { grid: (m, k, shear), cov, inner, outer };
            let better = match &best {
                None => true,
                Some(b) => {
                    let (r, rb) = (cand.ratio(), b.ratio());
                    if (r - rb).abs() > 1e-12 {
                        r < rb
                    } else if (shear == 0) != (b.grid.2 == 0) {
                        shear == 0
                    } else {
                        cand.cov < b.cov - 1e-12
                    }
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    let best = best.ok_or_else(|| Error::CoverageFailure(format!("no grid of {} disks covers tau = {}", n_charts, shape.tau)))?;
    if best.ratio() > opts.max_ratio {
        return Err(Error::CoverageFailure(format!(
            "radius ratio {:.4} exceeds {:.4} for tau = {}",
            best.ratio(),
            opts.max_ratio,
            shape.tau
        )));
    }
    let (m, k, shear) = best.grid;
    let mut centers = Vec::with_capacity(n_charts);
    for l in 0..k {
        for i in 0..m {
            let a = ((i * k + l * shear) % n_charts) as f64 / n_charts as f64;
            centers.push(shape.point(a, l as f64 / k as f64));
        }
    }
    let mut atlas = CoverAtlas {
        shape: *shape,
        n_charts,
        centers,
        outer_radius: best.outer,
        inner_radius: best.inner,
        overlaps: Vec::new(),
        grid: best.grid,
    };
    atlas.overlaps = enumerate_overlaps(&atlas);
    Ok(atlas)
}

fn enumerate_overlaps(atlas: &CoverAtlas) -> Vec<Overlap> {
    let mut out = Vec::new();
    let r2 = 2.0 * atlas.outer_radius;
    for j in 0..atlas.n_charts {
        for k in j..atlas.n_charts {
            for p in -2..=2i64 {
                for q in -2..=2i64 {
                    if j == k && (p, q) <= (0, 0) {
                        continue;
                    }
                    let a = atlas.centers[j] - atlas.centers[k] - atlas.lattice_point(p, q);
                    if a.norm() < r2 {
                        out.push(Overlap { j, k, lattice_shift: (p, q), translation: a });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn covered(atlas: &CoverAtlas, samples: usize) -> bool {
        let side = (samples as f64).sqrt() as usize;
        (0..side).all(|i| {
            (0..side).all(|l| {
                let z = atlas.shape.point((i as f64 + 0.5) / side as f64, (l as f64 + 0.5) / side as f64);
                atlas.distance_to_centers(z) < atlas.inner_radius
            })
        })
    }

    #[test]
    fn square_nine_is_three_by_three() {
        let atlas = build_cover(&TorusShape::square(), 9).unwrap();
        assert_eq!(atlas.grid, (3, 3, 0));
        assert!(covered(&atlas, 10_000));
        assert!(atlas.inner_radius < atlas.outer_radius);
    }

    #[test]
    fn tall_torus_covered() {
        let shape = TorusShape::new(Complex64::new(0.0, 2.0)).unwrap();
        let atlas = build_cover(&shape, 9).unwrap();
        assert!(covered(&atlas, 10_000));
        assert!(atlas.ratio() < 1.0);
    }

    #[test]
    fn too_few_charts() {
        assert!(matches!(build_cover(&TorusShape::square(), 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn degenerate_aspect_fails() {
        let shape = TorusShape::new(Complex64::new(0.0, 40.0)).unwrap();
        assert!(matches!(build_cover(&shape, 4), Err(Error::CoverageFailure(_))));
    }

    #[test]
    fn translations_are_consistent() {
        for n in 4..=12 {
            for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.866), Complex64::new(0.2, 1.3)] {
                let atlas = build_cover(&TorusShape::new(tau).unwrap(), n).unwrap();
                assert!(covered(&atlas, 2_500), "n = {}, tau = {}", n, tau);
                for o in &atlas.overlaps {
                    let back = atlas.centers[o.j] - atlas.centers[o.k] - o.translation;
                    let (a, b) = lattice_coords(&atlas.shape, back);
                    assert!((a - o.lattice_shift.0 as f64).abs() < 1e-12);
                    assert!((b - o.lattice_shift.1 as f64).abs() < 1e-12);
                    assert!(o.j != o.k);
                }
            }
        }
    }

    #[test]
    fn covering_radius_of_square_lattice() {
        let r = covering_radius(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        assert!((r - 0.5f64.sqrt()).abs() < 1e-12);
        let hex = covering_radius(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::PI / 3.0));
        assert!((hex - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }
}
