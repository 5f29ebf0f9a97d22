//! Dense complex polynomials in one variable.

use num_complex::Complex64;

pub type C64 = Complex64;

pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Coefficients of p(z + a).
pub fn taylor_shift(coeffs: &[C64], a: C64) -> Vec<C64> {
    let mut out = coeffs.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = out[j + 1] * a;
            out[j] += t;
        }
    }
    out
}

pub fn add_scaled(a: &[C64], b: &[C64], s: C64) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + s * b.get(i).copied().unwrap_or_default())
        .collect()
}

/// Truncated product of two series, keeping `len` terms.
pub fn mul_trunc(a: &[C64], b: &[C64], len: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of outer(inner(w)) where inner has zero constant term.
pub fn compose(outer: &[C64], inner: &[C64], len: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); len];
    for c in outer.iter().rev() {
        out = mul_trunc(&out, inner, len);
        out[0] += c;
    }
    out
}

/// Compositional inverse of φ(u) = u + Σ_{ν≥2} a_ν u^ν, to `len` terms.
pub fn revert(phi: &[C64], len: usize) -> Vec<C64> {
    let mut psi = vec![C64::new(0.0, 0.0); len];
    if len > 1 {
        psi[1] = C64::new(1.0, 0.0);
    }
    // ψ = w − Σ_{ν≥2} a_ν ψ^ν gains one correct coefficient per pass
    let mut tail = phi.to_vec();
    tail.iter_mut().take(2).for_each(|c| *c = C64::new(0.0, 0.0));
    for _ in 1..len {
        let t = compose(&tail, &psi, len);
        for (i, v) in psi.iter_mut().enumerate() {
            *v = if i == 1 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) } - t[i];
        }
    }
    psi
}

/// Roots of Σ c_k z^k (lowest degree first) from the companion matrix, polished by Newton steps.
pub fn roots(coeffs: &[C64]) -> Vec<C64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let companion = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let eig = companion.schur().eigenvalues().expect("complex Schur form is triangular");
    let deriv: Vec<C64> = (1..=n).map(|k| c[k] * k as f64).collect();
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..3 {
                let d = eval(&deriv, z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = eval(&c, z) / d;
                if !step.is_finite() {
                    break;
                }
                z -= step;
            }
            if eval(&c, z).norm() <= eval(&c, z0).norm() { z } else { z0 }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots_of_unity() {
        let c = [C64::new(-1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let r = roots(&c);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z.powi(3) - 1.0).norm() < 1e-14);
        }
        let q = roots(&[C64::new(2.0, 0.0), C64::new(-3.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, 3.0), C64::new(2.0, -1.0)];
        let a = C64::new(0.3, -0.7);
        let q = taylor_shift(&p, a);
        for z in [C64::new(0.1, 0.2), C64::new(-1.0, 0.5)] {
            assert!((eval(&q, z) - eval(&p, z + a)).norm() < 1e-12);
        }
    }

    #[test]
    fn truncated_product() {
        let a = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let p = mul_trunc(&a, &a, 2);
        assert_eq!(p, vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
    }

    #[test]
    fn reversion_inverts() {
        let phi = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.3, -0.2), C64::new(-0.1, 0.4), C64::new(0.05, 0.0)];
        let psi = revert(&phi, 9);
        let id = compose(&phi, &psi, 9);
        for (i, c) in id.iter().enumerate() {
            let want = if i == 1 { 1.0 } else { 0.0 };
            assert!((c - want).norm() < 1e-13, "{} {}", i, c);
        }
    }
}
