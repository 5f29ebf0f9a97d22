use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational_to_f64;
use crate::linalg::{nullspace, q, QMatrix};
use crate::poly;

pub type Point = [Complex64; 3];

/// Tolerance for projective equality and rank decisions.
pub const PROJ_TOL: f64 = 1e-10;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn cross(p: &Point, q: &Point) -> Point {
    [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
}

pub fn norm(p: &Point) -> f64 {
    p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(p: &Point) -> Point {
    let n = norm(p);
    // fix the phase of the largest coordinate
    let k = (0..3).max_by(|&a, &b| p[a].norm().total_cmp(&p[b].norm())).unwrap();
    let phase = p[k] / p[k].norm();
    [p[0] / (n * phase), p[1] / (n * phase), p[2] / (n * phase)]
}

/// Chordal distance sin∠(p, q) on P², the Fubini–Study angle's sine.
pub fn chordal(p: &Point, q: &Point) -> f64 {
    (norm(&cross(p, q)) / (norm(p) * norm(q))).min(1.0)
}

pub fn proj_eq(p: &Point, q: &Point) -> bool {
    chordal(p, q) <= PROJ_TOL
}

/// Projective automorphism of P² given by an invertible 3×3 matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjAut {
    pub matrix: [[Complex64; 3]; 3],
    /// Exact entries when the matrix is rational.
    pub exact: Option<Vec<Vec<BigRational>>>,
}

impl ProjAut {
    pub fn from_rationals(m: Vec<Vec<BigRational>>) -> Result<Self> {
        if m.len() != 3 || m.iter().any(|r| r.len() != 3) {
            return Err(Error::InvalidInput("matrix must be 3×3".into()));
        }
        let mut matrix = [[c(0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                matrix[i][j] = c(rational_to_f64(&m[i][j]));
            }
        }
        let aut = ProjAut { matrix, exact: Some(m) };
        if aut.exact_det().map_or(true, |d| d.is_zero()) {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        Ok(aut)
    }

    pub fn integer(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::from_rationals(m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn complex(matrix: [[Complex64; 3]; 3]) -> Result<Self> {
        let aut = ProjAut { matrix, exact: None };
        let s = aut.singular_values();
        if !(s[2] > PROJ_TOL * s[0]) {
            return Err(Error::InvalidInput("matrix is singular or ill-conditioned".into()));
        }
        Ok(aut)
    }

    pub fn identity() -> Self {
        Self::integer([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    fn exact_det(&self) -> Option<BigRational> {
        let m = self.exact.as_ref()?;
        Some(
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]),
        )
    }

    pub fn na(&self) -> Matrix3<Complex64> {
        Matrix3::from_fn(|i, j| self.matrix[i][j])
    }

    pub fn apply(&self, p: &Point) -> Point {
        let v = self.na() * Vector3::new(p[0], p[1], p[2]);
        [v[0], v[1], v[2]]
    }

    pub fn inverse(&self) -> ProjAut {
        let inv = self.na().try_inverse().expect("invertible by construction");
        ProjAut { matrix: std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)])), exact: None }
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> [f64; 3] {
        let mut s: Vec<f64> = self.na().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        [s[0], s[1], s[2]]
    }

    /// Lipschitz constant σ₁σ₂/σ₃² of the induced map in the chordal metric.
    pub fn chordal_lipschitz(&self) -> f64 {
        let s = self.singular_values();
        s[0] * s[1] / (s[2] * s[2])
    }

    /// True when the matrix is a scalar multiple of the identity.
    pub fn is_identity(&self) -> bool {
        if let Some(m) = &self.exact {
            return (0..3).all(|i| (0..3).all(|j| if i == j { m[i][i] == m[0][0] } else { m[i][j].is_zero() }));
        }
        let m = &self.matrix;
        let scale = m[0][0];
        let size = self.singular_values()[0];
        (0..3).all(|i| (0..3).all(|j| (m[i][j] - if i == j { scale } else { c(0.0) }).norm() <= PROJ_TOL * size))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjSubspace {
    /// Projective dimension: 0 point, 1 line, 2 the whole plane.
    pub dimension: usize,
    pub eigenvalue: Complex64,
    pub basis: Vec<Point>,
    /// Primitive integer basis when the eigenvalue is rational.
    pub exact_basis: Option<Vec<Vec<BigInt>>>,
}

impl ProjSubspace {
    pub fn contains(&self, p: &Point) -> bool {
        match self.dimension {
            0 => proj_eq(&self.basis[0], p),
            1 => {
                let n = cross(&self.basis[0], &self.basis[1]);
                let dot: Complex64 = (0..3).map(|i| n[i] * p[i]).sum();
                dot.norm() <= PROJ_TOL * norm(&n) * norm(p)
            }
            _ => true,
        }
    }

    pub fn distance(&self, p: &Point) -> f64 {
        match self.dimension {
            0 => chordal(&self.basis[0], p),
            1 => {
                let n = cross(&self.basis[0], &self.basis[1]);
                let dot: Complex64 = (0..3).map(|i| n[i] * p[i]).sum();
                dot.norm() / (norm(&n) * norm(p))
            }
            _ => 0.0,
        }
    }
}

/// Best rational approximation with denominator ≤ bound, by continued fractions.
fn rationalize(x: f64, bound: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > bound {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac.abs() < 1e-14 {
            break;
        }
        y = 1.0 / frac;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn char_poly_exact(m: &[Vec<BigRational>]) -> [BigRational; 4] {
    let tr = &m[0][0] + &m[1][1] + &m[2][2];
    let minors = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0] + &m[0][0] * &m[2][2] - &m[0][2] * &m[2][0] + &m[1][1] * &m[2][2]
        - &m[1][2] * &m[2][1];
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    // λ³ − tr·λ² + minors·λ − det, lowest degree first
    [-det, minors, -tr, BigRational::one()]
}

fn eval_q(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn null_point(m: &Matrix3<Complex64>) -> Point {
    let rows: Vec<Point> = (0..3).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]).collect();
    let mut best = cross(&rows[0], &rows[1]);
    for (a, b) in [(0, 2), (1, 2)] {
        let v = cross(&rows[a], &rows[b]);
        if norm(&v) > norm(&best) {
            best = v;
        }
    }
    normalize(&best)
}

fn numeric_eigenspace(aut: &ProjAut, e: Complex64) -> Vec<Point> {
    let shifted = aut.na() - Matrix3::identity() * e;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let scale = aut.singular_values()[0];
    (0..3)
        .filter(|&i| svd.singular_values[i] <= 1e-8 * scale)
        .map(|i| normalize(&[v_t[(i, 0)].conj(), v_t[(i, 1)].conj(), v_t[(i, 2)].conj()]))
        .collect()
}

fn subspace(eigenvalue: Complex64, basis: Vec<Point>, exact_basis: Option<Vec<Vec<BigInt>>>) -> ProjSubspace {
    ProjSubspace { dimension: basis.len() - 1, eigenvalue, basis, exact_basis }
}

/// Projectivized eigenspaces of the matrix: the fixed locus of the automorphism.
pub fn fixed_locus(aut: &ProjAut) -> Vec<ProjSubspace> {
    if let Some(m) = &aut.exact {
        return fixed_locus_exact(aut, m);
    }
    let eig = aut.na().schur().eigenvalues().expect("complex Schur form is triangular");
    let scale = aut.singular_values()[0];
    let mut distinct: Vec<Complex64> = Vec::new();
    for e in eig.iter() {
        if !distinct.iter().any(|d| (d - e).norm() <= 1e-7 * scale) {
            distinct.push(*e);
        }
    }
    distinct
        .into_iter()
        .filter_map(|e| {
            let basis = numeric_eigenspace(aut, e);
            (!basis.is_empty()).then(|| subspace(e, basis, None))
        })
        .collect()
}

fn fixed_locus_exact(aut: &ProjAut, m: &[Vec<BigRational>]) -> Vec<ProjSubspace> {
    let cp = char_poly_exact(m);
    let cpf: Vec<Complex64> = cp.iter().map(|x| c(rational_to_f64(x))).collect();
    let mut rational: Vec<BigRational> = Vec::new();
    let mut irrational: Vec<Complex64> = Vec::new();
    for r in poly::roots(&cpf) {
        // repeated roots come back perturbed, so try coarse denominators first
        let cand = if r.im.abs() < 1e-4 {
            (0..=6).filter_map(|k| rationalize(r.re, 10i64.pow(k))).find(|x| eval_q(&cp, x).is_zero())
        } else {
            None
        };
        match cand {
            Some(x) => {
                if !rational.contains(&x) {
                    rational.push(x);
                }
            }
            _ => irrational.push(r),
        }
    }
    let mut out = Vec::new();
    for e in rational {
        let shifted: QMatrix = (0..3).map(|i| (0..3).map(|j| if i == j { &m[i][j] - &e } else { m[i][j].clone() }).collect()).collect();
        let ns = nullspace(&shifted, 3);
        let ints: Vec<Vec<BigInt>> = ns.iter().map(|v| crate::linalg::primitive(v)).collect();
        let basis: Vec<Point> = ints.iter().map(|v| normalize(&[c(v[0].to_f64().unwrap()), c(v[1].to_f64().unwrap()), c(v[2].to_f64().unwrap())])).collect();
        out.push(subspace(c(rational_to_f64(&e)), basis, Some(ints)));
    }
    // a non-rational root of a rational cubic is simple, so its eigenspace is a point
    for e in irrational {
        let shifted = aut.na() - Matrix3::identity() * e;
        out.push(subspace(e, vec![null_point(&shifted)], None));
    }
    out
}

/// Homogeneous ternary polynomial with complex coefficients keyed by exponents (x, y, z).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TernaryForm {
    pub terms: BTreeMap<[u32; 3], Complex64>,
}

impl TernaryForm {
    pub fn from_terms(terms: &[([u32; 3], Complex64)]) -> Self {
        let mut f = TernaryForm::default();
        for (e, v) in terms {
            *f.terms.entry(*e).or_insert(c(0.0)) += v;
        }
        f
    }

    pub fn fermat() -> Self {
        Self::from_terms(&[([3, 0, 0], c(1.0)), ([0, 3, 0], c(1.0)), ([0, 0, 3], c(1.0))])
    }

    /// x³ + y³ + z³ − 3k·xyz.
    pub fn hesse(k: Complex64) -> Self {
        Self::from_terms(&[([3, 0, 0], c(1.0)), ([0, 3, 0], c(1.0)), ([0, 0, 3], c(1.0)), ([1, 1, 1], -3.0 * k)])
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|e| e.iter().sum())
    }

    pub fn eval(&self, p: &Point) -> Complex64 {
        self.terms.iter().map(|(e, v)| v * p[0].powu(e[0]) * p[1].powu(e[1]) * p[2].powu(e[2])).sum()
    }

    pub fn derivative(&self, var: usize) -> TernaryForm {
        let mut out = TernaryForm::default();
        for (e, v) in &self.terms {
            if e[var] > 0 {
                let mut f = *e;
                f[var] -= 1;
                *out.terms.entry(f).or_insert(c(0.0)) += v * e[var] as f64;
            }
        }
        out
    }

    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let mut out = TernaryForm::default();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                *out.terms.entry([a[0] + b[0], a[1] + b[1], a[2] + b[2]]).or_insert(c(0.0)) += u * v;
            }
        }
        out
    }

    pub fn add(&self, other: &TernaryForm, scale: f64) -> TernaryForm {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            *out.terms.entry(*e).or_insert(c(0.0)) += v * scale;
        }
        out
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// det of the matrix of second partials.
    pub fn hessian(&self) -> TernaryForm {
        let h: Vec<Vec<TernaryForm>> = (0..3).map(|i| (0..3).map(|j| self.derivative(i).derivative(j)).collect()).collect();
        let minor = |a: usize, b: usize, cc: usize, d: usize| h[a][cc].mul(&h[b][d]).add(&h[a][d].mul(&h[b][cc]), -1.0);
        h[0][0].mul(&minor(1, 2, 1, 2)).add(&h[0][1].mul(&minor(1, 2, 0, 2)), -1.0).add(&h[0][2].mul(&minor(1, 2, 0, 1)), 1.0)
    }
}

const QUADRATIC_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [1, 0, 1], [0, 1, 1]];

/// Discriminant of a plane cubic up to a constant, scaled by ‖F‖^{12}.
///
/// Uses Sylvester's 6×6 determinant for the resultant of the three partials, whose Jacobian is the Hessian.
pub fn relative_discriminant(f: &TernaryForm) -> f64 {
    let partials: Vec<TernaryForm> = (0..3).map(|i| f.derivative(i)).collect();
    let h = f.hessian();
    let rows: Vec<TernaryForm> = partials.iter().cloned().chain((0..3).map(|i| h.derivative(i))).collect();
    let m = nalgebra::Matrix6::<Complex64>::from_fn(|i, j| rows[i].terms.get(&QUADRATIC_MONOMIALS[j]).copied().unwrap_or(c(0.0)));
    // normalize each row so the determinant is scale-free
    let mut m = m;
    for i in 0..6 {
        let n = (0..6).map(|j| m[(i, j)].norm()).fold(0.0, f64::max);
        if n > 0.0 {
            for j in 0..6 {
                m[(i, j)] /= n;
            }
        }
    }
    m.determinant().norm()
}

pub const SINGULAR_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicFixedPoints {
    /// The automorphism fixes a curve component pointwise (here: the identity).
    pub infinite: bool,
    pub points: Vec<Point>,
    pub fixed_lines: usize,
    pub isolated_points: usize,
    /// 3·lines + isolated points.
    pub bezout_bound: usize,
}

/// Roots of F restricted to the line through u and v, as points of P².
pub fn line_cubic_intersection(f: &TernaryForm, u: &Point, v: &Point) -> Option<Vec<Point>> {
    // G(λ) = F(λu + v), coefficients by a 4-point DFT
    let deg = f.degree().unwrap_or(0) as usize;
    let n = deg + 1;
    let samples: Vec<Complex64> = (0..n)
        .map(|j| {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64);
            f.eval(&[w * u[0] + v[0], w * u[1] + v[1], w * u[2] + v[2]])
        })
        .collect();
    let coeffs: Vec<Complex64> = (0..n)
        .map(|k| {
            (0..n).map(|j| samples[j] * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * k) as f64 / n as f64)).sum::<Complex64>() / n as f64
        })
        .collect();
    let scale = coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale <= PROJ_TOL * f.max_coefficient() * norm(u).max(norm(v)).powi(deg as i32) {
        return None;
    }
    let mut trimmed = coeffs.clone();
    let mut points = Vec::new();
    while trimmed.len() > 1 && trimmed.last().unwrap().norm() <= 1e-12 * scale {
        trimmed.pop();
    }
    if trimmed.len() < coeffs.len() {
        points.push(normalize(u));
    }
    for l in poly::roots(&trimmed) {
        points.push(normalize(&[l * u[0] + v[0], l * u[1] + v[1], l * u[2] + v[2]]));
    }
    Some(points)
}

fn push_unique(points: &mut Vec<Point>, p: Point) {
    if !points.iter().any(|q| proj_eq(q, &p)) {
        points.push(p);
    }
}

/// Points of the cubic fixed by the automorphism.
pub fn cubic_fixed_points(aut: &ProjAut, f: &TernaryForm) -> Result<CubicFixedPoints> {
    if f.degree() != Some(3) || relative_discriminant(f) < SINGULAR_TOL {
        return Err(Error::SingularCubic);
    }
    let locus = fixed_locus(aut);
    let fixed_lines = locus.iter().filter(|s| s.dimension == 1).count();
    let isolated_points = locus.iter().filter(|s| s.dimension == 0).count();
    let bezout_bound = 3 * fixed_lines + isolated_points;
    if locus.iter().any(|s| s.dimension == 2) {
        return Ok(CubicFixedPoints { infinite: true, points: Vec::new(), fixed_lines, isolated_points, bezout_bound });
    }
    let mut points = Vec::new();
    let size = f.max_coefficient();
    for s in &locus {
        match s.dimension {
            1 => match line_cubic_intersection(f, &s.basis[0], &s.basis[1]) {
                Some(ps) => ps.into_iter().for_each(|p| push_unique(&mut points, p)),
                None => return Ok(CubicFixedPoints { infinite: true, points, fixed_lines, isolated_points, bezout_bound }),
            },
            _ => {
                let p = s.basis[0];
                if f.eval(&p).norm() <= 1e-9 * size * norm(&p).powi(3) {
                    push_unique(&mut points, p);
                }
            }
        }
    }
    Ok(CubicFixedPoints { infinite: false, points, fixed_lines, isolated_points, bezout_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_fixes_plane() {
        let l = fixed_locus(&ProjAut::identity());
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].dimension, 2);
        assert!(ProjAut::integer([[3, 0, 0], [0, 3, 0], [0, 0, 3]]).unwrap().is_identity());
    }

    #[test]
    fn distinct_diagonal_gives_three_points() {
        let l = fixed_locus(&ProjAut::integer([[1, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap());
        assert_eq!(l.len(), 3);
        assert!(l.iter().all(|s| s.dimension == 0));
        let mut exact: Vec<Vec<BigInt>> = l.iter().map(|s| s.exact_basis.clone().unwrap()[0].clone()).collect();
        exact.sort();
        let e = |v: [i64; 3]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(exact, vec![e([0, 0, 1]), e([0, 1, 0]), e([1, 0, 0])]);
    }

    #[test]
    fn repeated_eigenvalue_gives_line_and_point() {
        let l = fixed_locus(&ProjAut::integer([[1, 0, 0], [0, 1, 0], [0, 0, 2]]).unwrap());
        let line = l.iter().find(|s| s.dimension == 1).unwrap();
        let point = l.iter().find(|s| s.dimension == 0).unwrap();
        assert!(line.contains(&[c(1.0), c(5.0), c(0.0)]));
        assert!(!line.contains(&[c(0.0), c(0.0), c(1.0)]));
        assert!(proj_eq(&point.basis[0], &[c(0.0), c(0.0), c(1.0)]));
    }

    #[test]
    fn permutation_has_irrational_eigenvalues() {
        // cyclic shift: eigenvalues 1, ω, ω²
        let aut = ProjAut::integer([[0, 0, 1], [1, 0, 0], [0, 1, 0]]).unwrap();
        let l = fixed_locus(&aut);
        assert_eq!(l.len(), 3);
        for s in &l {
            let p = s.basis[0];
            assert!(proj_eq(&aut.apply(&p), &p));
        }
        let fermat = cubic_fixed_points(&aut, &TernaryForm::fermat()).unwrap();
        // fixed points [1:ω^k:ω^{2k}] satisfy 1 + ω^{3k} + ω^{6k} = 3 ≠ 0
        assert!(fermat.points.is_empty());
    }

    #[test]
    fn complex_matrix_path() {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let aut = ProjAut::complex([[c(1.0), c(0.0), c(0.0)], [c(0.0), c(1.0), c(0.0)], [c(0.0), c(0.0), w]]).unwrap();
        let l = fixed_locus(&aut);
        assert_eq!(l.iter().filter(|s| s.dimension == 1).count(), 1);
        let pts = cubic_fixed_points(&aut, &TernaryForm::fermat()).unwrap();
        // {z = 0} ∩ Fermat has 3 points, and [0:0:1] is not on the cubic
        assert_eq!(pts.points.len(), 3);
    }

    #[test]
    fn fermat_reflection_three_points() {
        let aut = ProjAut::integer([[1, 0, 0], [0, 1, 0], [0, 0, -1]]).unwrap();
        let rep = cubic_fixed_points(&aut, &TernaryForm::fermat()).unwrap();
        assert!(!rep.infinite);
        assert_eq!(rep.points.len(), 3);
        assert!(rep.points.len() <= rep.bezout_bound);
        for p in &rep.points {
            assert!(p[2].norm() < 1e-12);
            assert!(TernaryForm::fermat().eval(p).norm() < 1e-12);
        }
        assert!(cubic_fixed_points(&ProjAut::identity(), &TernaryForm::fermat()).unwrap().infinite);
    }

    #[test]
    fn singular_cubics_detected() {
        assert!(relative_discriminant(&TernaryForm::fermat()) > 1e-3);
        assert!(relative_discriminant(&TernaryForm::hesse(c(1.0))) < 1e-12);
        let cusp = TernaryForm::from_terms(&[([0, 2, 1], c(1.0)), ([3, 0, 0], c(-1.0))]);
        assert!(relative_discriminant(&cusp) < 1e-12);
        let node = TernaryForm::from_terms(&[([0, 2, 1], c(1.0)), ([3, 0, 0], c(-1.0)), ([2, 0, 1], c(-1.0))]);
        assert!(relative_discriminant(&node) < 1e-12);
        assert!(relative_discriminant(&TernaryForm::hesse(c(0.3))) > 1e-6);
        let aut = ProjAut::identity();
        assert_eq!(cubic_fixed_points(&aut, &node), Err(Error::SingularCubic));
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(ProjAut::integer([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).is_err());
    }
}
