//! Chart model of the glued region W* and its holomorphic invariants.

pub mod kernel;
pub mod leaves;
pub mod model;
pub mod volume;

pub use kernel::{
    function_kernel, global_function_dim, global_vector_field_basis, vector_field_kernel, KernelCaps, KernelEntry, KernelReport, VectorFieldReport,
};
pub use leaves::{leaf_density, star_discrepancy, DensityReport};
pub use model::{two_form_factor, ChartMap, Dual, Monomial};
pub use volume::{closed_form_volume, curve_integral, quadrature_volume, volume_bound, VolumeReport};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cover_cech::{build_cover, cocycle::triple_overlap_residual, restriction_cocycle, CoverAtlas, FlatCocycle};
use crate::error::{Error, Result};
use crate::torus_pic::{FlatBundleClass, TorusShape};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingDatum {
    pub atlas: CoverAtlas,
    pub class: FlatBundleClass,
    pub cocycle: FlatCocycle,
    /// Outer radius R of the fibre disks on the first side.
    pub r_outer: f64,
    /// Outer radius R' on the second side.
    pub r_prime: f64,
    /// g(z) = z + g_shift identifies the two curves.
    pub g_shift: Complex64,
}

impl GluingDatum {
    pub fn new(shape: &TorusShape, n_charts: usize, class: &FlatBundleClass, r_outer: f64, r_prime: f64, g_shift: Complex64) -> Result<Self> {
        if !(r_outer > 1.0 && r_prime > 1.0) {
            return Err(Error::Precondition(format!("need R > 1 and R' > 1, got {} and {}", r_outer, r_prime)));
        }
        let atlas = build_cover(shape, n_charts)?;
        let cocycle = restriction_cocycle(class, &atlas, 1);
        Ok(GluingDatum { atlas, class: class.clone(), cocycle, r_outer, r_prime, g_shift })
    }

    /// (z_k, w_k) = (z_j + A_kj, t_kj·w_j) on overlap idx.
    ///
    /// The cocycle stores t_jk with f_j = t_jk·f_k, so the fibre coordinate moves by its inverse.
    pub fn transition(&self, idx: usize) -> ChartMap {
        ChartMap { shift: self.atlas.overlaps[idx].translation, fibre: Monomial::rotation(self.cocycle.turns[idx].neg()) }
    }

    /// (z'_k, w'_k) = (z'_j + A_kj, t_kj^{-1}·w'_j) on the second side.
    pub fn transition_prime(&self, idx: usize) -> ChartMap {
        ChartMap { shift: self.atlas.overlaps[idx].translation, fibre: Monomial::rotation(self.cocycle.turns[idx].clone()) }
    }

    /// f: (z_j, w_j) ↦ (g^{-1}(z_j), 1/w_j).
    pub fn gluing_map(&self) -> ChartMap {
        ChartMap { shift: -self.g_shift, fibre: Monomial::inversion() }
    }

    pub fn transitions(&self) -> Vec<ChartMap> {
        (0..self.atlas.overlaps.len()).map(|i| self.transition(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub checks: Vec<ConditionCheck>,
    pub all_hold: bool,
}

fn check(condition: &str, holds: bool, detail: String) -> ConditionCheck {
    ConditionCheck { condition: condition.into(), holds, detail }
}

/// Verifies both sides' chart conditions and f∘T_jk = T'_jk∘f on explicit transition lists.
pub fn check_model(datum: &GluingDatum, side: &[ChartMap], side_prime: &[ChartMap]) -> TransitionReport {
    let atlas = &datum.atlas;
    let mut checks = Vec::new();
    checks.push(check("(i) fibre disk radius R > 1", datum.r_outer > 1.0, format!("R = {}", datum.r_outer)));
    checks.push(check("(i)' fibre disk radius R' > 1", datum.r_prime > 1.0, format!("R' = {}", datum.r_prime)));
    let empty = atlas.overlaps.iter().filter(|o| o.translation.norm() >= 2.0 * atlas.outer_radius).count();
    checks.push(check("(ii) overlaps are nonempty products", empty == 0, format!("{} empty components", empty)));
    let annulus = 1.0 / datum.r_prime < datum.r_outer;
    checks.push(check("W* annuli 1/R' < |w| < R nonempty", annulus, format!("1/R' = {}", 1.0 / datum.r_prime)));
    let shift_ok = side.iter().zip(&atlas.overlaps).all(|(m, o)| m.shift == o.translation);
    checks.push(check("(iii) base coordinates translate by A_kj", shift_ok, String::new()));
    let unitary: Vec<usize> = side.iter().enumerate().filter(|(_, m)| !m.fibre.preserves_modulus()).map(|(i, _)| i).collect();
    checks.push(check("(iv) |t_kj| = 1", unitary.is_empty(), format!("violations at overlaps {:?}", unitary)));
    let unitary_p: Vec<usize> = side_prime.iter().enumerate().filter(|(_, m)| !m.fibre.preserves_modulus()).map(|(i, _)| i).collect();
    checks.push(check("(iv)' |t_kj^{-1}| = 1", unitary_p.is_empty(), format!("violations at overlaps {:?}", unitary_p)));
    let (count, worst) = triple_overlap_residual(atlas, &datum.cocycle);
    checks.push(check("cocycle identity on triple overlaps", worst < 1e-12, format!("{} triples, worst {:.3e}", count, worst)));
    let f = datum.gluing_map();
    let bad: Vec<usize> = side
        .iter()
        .zip(side_prime)
        .enumerate()
        .filter(|(_, (t, tp))| !f.compose(t).same_as(&tp.compose(&f)))
        .map(|(i, _)| i)
        .collect();
    checks.push(check("f∘T_kj = T'_kj∘f", bad.is_empty(), format!("violations at overlaps {:?}", bad)));
    let all_hold = checks.iter().all(|c| c.holds);
    TransitionReport { checks, all_hold }
}

pub fn check_transitions(datum: &GluingDatum) -> TransitionReport {
    let side = datum.transitions();
    let side_prime: Vec<ChartMap> = (0..side.len()).map(|i| datum.transition_prime(i)).collect();
    check_model(datum, &side, &side_prime)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoFormReport {
    /// Symbolic factors of the pulled-back form under each transition (all 1).
    pub transition_factors: Vec<i64>,
    /// Symbolic factor under f (−1).
    pub gluing_factor: i64,
    /// f∘f on the fibre is the identity.
    pub involution: bool,
    /// Worst numeric deviation at the sample points.
    pub numeric_error: f64,
    pub holds: bool,
    pub convention: String,
}

/// Checks that dz∧dw/w is chart-invariant and pulls back to −dz∧dw/w under f.
pub fn pullback_two_form_check(datum: &GluingDatum, samples: &[(Complex64, Complex64)]) -> TwoFormReport {
    let maps = datum.transitions();
    let transition_factors: Vec<i64> = maps.iter().map(|m| m.fibre.log_derivative_factor()).collect();
    let f = datum.gluing_map();
    let gluing_factor = f.fibre.log_derivative_factor();
    let involution = f.fibre.compose(&f.fibre) == Monomial::identity();
    let mut numeric_error: f64 = 0.0;
    for &(z, w) in samples {
        for m in &maps {
            numeric_error = numeric_error.max((two_form_factor(m, z, w) - 1.0).norm());
        }
        numeric_error = numeric_error.max((two_form_factor(&f, z, w) + 1.0).norm());
    }
    let holds = transition_factors.iter().all(|e| *e == 1) && gluing_factor == -1 && involution && numeric_error < 1e-12;
    TwoFormReport {
        transition_factors,
        gluing_factor,
        involution,
        numeric_error,
        holds,
        convention: "sigma = dz ^ dw/w on W*_j; f*(sigma') = -sigma".into(),
    }
}

/// A level {|w_j| = r} of the Levi-flat family, 1/R' < r < R.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeviFlatLevel {
    pub r: f64,
}

impl LeviFlatLevel {
    pub fn new(r: f64, datum: &GluingDatum) -> Result<Self> {
        if !(1.0 / datum.r_prime < r && r < datum.r_outer) {
            return Err(Error::Domain(format!("level {} outside ({}, {})", r, 1.0 / datum.r_prime, datum.r_outer)));
        }
        Ok(LeviFlatLevel { r })
    }

    /// The level is chart-independent when every transition preserves |w|.
    pub fn well_defined(&self, datum: &GluingDatum) -> bool {
        datum.transitions().iter().all(|m| m.fibre.preserves_modulus())
    }
}
