//! The K3 lattice U³ ⊕ E8(−1)² and ranks of its intersections with period hyperplanes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det_int, integer_kernel, primitive, q, rank, to_q, QMatrix, ZMatrix};

pub const LATTICE_RANK: usize = 22;
/// Picard numbers of Kummer surfaces are at least this.
pub const KUMMER_PICARD_MIN: usize = 16;

const E8_CARTAN: [[i64; 8]; 8] = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3LatticeForm {
    pub gram: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormInvariants {
    pub symmetric: bool,
    pub even: bool,
    pub determinant: i64,
    pub signature: Signature,
}

impl FormInvariants {
    pub fn all_hold(&self) -> bool {
        self.symmetric && self.even && self.determinant.abs() == 1 && self.signature == Signature { positive: 3, negative: 19, zero: 0 }
    }
}

/// Signature of a rational symmetric matrix by congruence diagonalization.
pub fn signature(m: &QMatrix) -> Signature {
    let n = m.len();
    let mut a = m.clone();
    let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // all remaining diagonal entries vanish, so a_kk becomes 2·a_kj
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
            } else {
                sig.zero += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in k..n {
                let v = &a[k][c] * &f;
                a[i][c] -= v;
            }
            for row in a.iter_mut().skip(k) {
                let v = &row[k] * &f;
                row[i] -= v;
            }
        }
        if pivot.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    sig
}

/// The K3 lattice as U ⊕ U ⊕ U ⊕ E8(−1) ⊕ E8(−1).
pub fn gram_matrix() -> K3LatticeForm {
    let mut gram = vec![vec![0i64; LATTICE_RANK]; LATTICE_RANK];
    for b in 0..3 {
        gram[2 * b][2 * b + 1] = 1;
        gram[2 * b + 1][2 * b] = 1;
    }
    for b in 0..2 {
        let off = 6 + 8 * b;
        for i in 0..8 {
            for j in 0..8 {
                gram[off + i][off + j] = -E8_CARTAN[i][j];
            }
        }
    }
    let form = K3LatticeForm { gram };
    debug_assert!(form.invariants().all_hold());
    form
}

/// Hyperplane ker(Σ γ_k⟨v_k, ·⟩) of L ⊗ ℂ for formally independent transcendental γ_k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub span_vectors: Vec<Vec<BigRational>>,
}

impl Hyperplane {
    pub fn new(span_vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        if span_vectors.is_empty() || span_vectors.len() > LATTICE_RANK {
            return Err(Error::InvalidInput(format!("need 1 to {LATTICE_RANK} span vectors, got {}", span_vectors.len())));
        }
        if let Some(v) = span_vectors.iter().find(|v| v.len() != LATTICE_RANK) {
            return Err(Error::InvalidInput(format!("span vector of length {}", v.len())));
        }
        let r = rank(&span_vectors);
        if r < span_vectors.len() {
            return Err(Error::InvalidInput(format!("span vectors have rational rank {r} < {}", span_vectors.len())));
        }
        Ok(Hyperplane { span_vectors })
    }

    pub fn from_integers(vs: &[Vec<i64>]) -> Result<Self> {
        Self::new(vs.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Parses rationals written as "p" or "p/q".
    pub fn parse(vs: &[Vec<String>]) -> Result<Self> {
        let rows = vs
            .iter()
            .map(|v| v.iter().map(|s| s.trim().parse::<BigRational>().map_err(|e| Error::InvalidInput(format!("{s}: {e}")))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnWitness {
    pub n: usize,
    pub hyperplane_rank: usize,
    /// Integer basis of M.
    pub basis: Vec<Vec<BigInt>>,
    pub rank_of_m: usize,
    /// ⟨v_k, m⟩ = 0 for every span vector and basis vector.
    pub contained: bool,
    /// Rank of the span functionals, unchanged on L_ℂ / M_ℂ.
    pub functional_rank: usize,
    /// Dimension of the projective space of hyperplanes through M_ℂ.
    pub stratum_dimension: usize,
    pub reconstruction: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardBound {
    pub dim_t: usize,
    pub rho_bound: usize,
    pub non_kummer_possible: bool,
}

impl K3LatticeForm {
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        self.gram.iter().zip(x).map(|(row, xi)| xi * row.iter().zip(y).map(|(g, yj)| g * yj).sum::<i64>()).sum()
    }

    fn as_z(&self) -> ZMatrix {
        self.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn invariants(&self) -> FormInvariants {
        let n = self.gram.len();
        let symmetric = (0..n).all(|i| (0..n).all(|j| self.gram[i][j] == self.gram[j][i]));
        let even = (0..n).all(|i| self.gram[i][i] % 2 == 0);
        let z = self.as_z();
        let determinant = i64::try_from(det_int(&z)).unwrap_or(i64::MAX);
        let signature = signature(&to_q(&z));
        FormInvariants { symmetric, even, determinant, signature }
    }

    /// Integer rows of the functionals x ↦ ⟨v_k, x⟩.
    fn functionals(&self, v: &Hyperplane) -> ZMatrix {
        let g = to_q(&self.as_z());
        v.span_vectors
            .iter()
            .map(|vk| {
                let row: Vec<BigRational> = (0..LATTICE_RANK).map(|c| vk.iter().zip(&g).map(|(a, grow)| a * &grow[c]).sum()).collect();
                primitive(&row)
            })
            .collect()
    }

    /// ℤ-basis of L ∩ V: by independence of the γ_k an integer x lies in V iff ⟨v_k, x⟩ = 0 for all k.
    pub fn lattice_in_hyperplane(&self, v: &Hyperplane) -> ZMatrix {
        integer_kernel(&self.functionals(v), LATTICE_RANK)
    }

    /// r(V) = rank(L ∩ V).
    pub fn hyperplane_rank(&self, v: &Hyperplane) -> usize {
        self.lattice_in_hyperplane(v).len()
    }

    /// A rank-n submodule M ⊆ L ∩ V with V the preimage of the hyperplane V/M_ℂ of L_ℂ/M_ℂ.
    pub fn f_n_witness(&self, v: &Hyperplane, n: usize) -> Result<FnWitness> {
        let kernel = self.lattice_in_hyperplane(v);
        let r = kernel.len();
        if n > r {
            return Err(Error::RankTooSmall { rank: r, requested: n });
        }
        if n == 0 {
            return Err(Error::Range("n must be at least 1".into()));
        }
        let basis: ZMatrix = kernel.into_iter().take(n).collect();
        let rank_of_m = rank(&to_q(&basis));
        let funcs = self.functionals(v);
        let contained = basis.iter().all(|m| funcs.iter().all(|f| f.iter().zip(m).map(|(a, b)| a * b).sum::<BigInt>().is_zero()));
        let functional_rank = rank(&to_q(&funcs));
        let stratum_dimension = LATTICE_RANK - 1 - n;
        // V ⊇ M_ℂ has codimension 1, so V/M_ℂ is a hyperplane of the (22 − n)-dimensional quotient
        let reconstruction = contained && rank_of_m == n && functional_rank == v.span_vectors.len() && functional_rank + n <= LATTICE_RANK;
        Ok(FnWitness { n, hyperplane_rank: r, basis, rank_of_m, contained, functional_rank, stratum_dimension, reconstruction })
    }
}

/// ρ(X_t) ≤ 20 − dim T for some member of a family over T.
pub fn picard_bound(dim_t: i64) -> Result<PicardBound> {
    if !(0..=20).contains(&dim_t) {
        return Err(Error::Range(format!("dim T = {dim_t} outside [0, 20]")));
    }
    let dim_t = dim_t as usize;
    let rho_bound = 20 - dim_t;
    Ok(PicardBound { dim_t, rho_bound, non_kummer_possible: rho_bound < KUMMER_PICARD_MIN })
}

#[cfg(test)]
mod tests;
