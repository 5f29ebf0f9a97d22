//! Exact linear algebra over ℚ and ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMatrix = Vec<Vec<BigRational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_q(m: &ZMatrix) -> QMatrix {
    m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of {x : m·x = 0}.
pub fn nullspace(m: &QMatrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Clears denominators and divides by the content.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_int(m: &ZMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// ℤ-basis of {x ∈ ℤ^cols : m·x = 0}, by column reduction of [mᵀ | I].
pub fn integer_kernel(m: &ZMatrix, cols: usize) -> ZMatrix {
    let rows = m.len();
    // augmented rows: (column c of m, e_c)
    let aug: ZMatrix = (0..cols)
        .map(|c| {
            let mut v: Vec<BigInt> = (0..rows).map(|i| m[i][c].clone()).collect();
            v.extend((0..cols).map(|k| if k == c { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let h = echelon_int(&aug, rows);
    h.into_iter().filter(|v| v[..rows].iter().all(Zero::is_zero)).map(|v| v[rows..].to_vec()).collect()
}

/// Unimodular row reduction to echelon form on the first `lead` columns, keeping all rows.
pub fn echelon_int(m: &ZMatrix, lead: usize) -> ZMatrix {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..lead {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let f = a[i][c].div_floor(&a[r][c]);
                    for j in 0..cols {
                        let v = &a[r][j] * &f;
                        a[i][j] -= v;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !a[r][c].is_zero() {
            r += 1;
        }
    }
    a
}

pub fn mat_vec_int(m: &ZMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det_int(&z(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(det_int(&z(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_int(&z(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), BigInt::zero());
        assert_eq!(det_int(&z(&[&[0, 0, 1], &[2, 0, 0], &[0, 3, 0]])), BigInt::from(6));
    }

    #[test]
    fn rank_and_nullspace() {
        let m = to_q(&z(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]));
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(primitive(&ns[0]), vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (−2, 1), not (−4, 2)
        let k = integer_kernel(&z(&[&[2, 4]]), 2);
        assert_eq!(k.len(), 1);
        assert!(mat_vec_int(&z(&[&[2, 4]]), &k[0]).iter().all(Zero::is_zero));
        let g = k[0].iter().fold(BigInt::zero(), |a, x| a.gcd(x));
        assert_eq!(g, BigInt::one());
        let k3 = integer_kernel(&z(&[&[1, 1, 1]]), 3);
        assert_eq!(k3.len(), 2);
    }

    #[test]
    fn echelon_rank() {
        let h = echelon_int(&z(&[&[2, 4, 6], &[1, 2, 3], &[0, 1, 1]]), 3);
        assert_eq!(h.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count(), 2);
    }
}
