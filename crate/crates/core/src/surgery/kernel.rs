use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GluingDatum;
use crate::error::{Error, Result};
use crate::torus_pic::{distance_to_trivial, is_torsion_up_to, FlatBundleClass, TorusShape};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelCaps {
    /// Fourier modes m in [−mode_cap, mode_cap].
    pub mode_cap: usize,
    /// Laurent levels n in [−laurent_cap, laurent_cap].
    pub laurent_cap: usize,
    /// Levels with d(𝕀, L^n) below this are rejected as near-torsion.
    pub distance_floor: f64,
}

impl Default for KernelCaps {
    fn default() -> Self {
        KernelCaps { mode_cap: 8, laurent_cap: 8, distance_floor: 1e-9 }
    }
}

/// A coefficient c_{m,n} of w^n·e^{2πi(m+α_n)z} left free by the constraints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub level: i64,
    pub mode: i64,
    /// 0 for a function or the ∂/∂z coefficient, 1 for the ∂/∂w coefficient.
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub caps: KernelCaps,
    pub unknowns: usize,
    pub dimension: usize,
    pub kernel: Vec<KernelEntry>,
    /// Smallest nonzero constraint coefficient |e^{2πi(m+α)τ} − e^{2πiβ}|.
    pub min_nonzero_constraint: f64,
}

/// Diagonal constraints on one quasi-periodic level of class `level_class`.
///
/// A coefficient with exponent m + α is free iff e^{2πi(m+α)τ} = e^{2πiβ}, which for Im τ > 0 forces
/// m + α = 0 and β ∈ ℤ.
fn level_constraints(shape: &TorusShape, level_class: &FlatBundleClass, mode_cap: usize) -> (Vec<i64>, f64) {
    let alpha = level_class.a.frac();
    let beta = level_class.b.dist_to_integer();
    let mut free = Vec::new();
    let mut min_nonzero = f64::INFINITY;
    for m in -(mode_cap as i64)..=mode_cap as i64 {
        // α is reduced to [0, 1), so m + α vanishes only for m = 0, α = 0
        if m == 0 && alpha.is_zero() && beta.is_zero() {
            free.push(m);
            continue;
        }
        let lhs = (Complex64::i() * std::f64::consts::TAU * (m as f64 + alpha.to_f64()) * shape.tau).exp();
        let rhs = Complex64::from_polar(1.0, std::f64::consts::TAU * level_class.b.to_f64());
        min_nonzero = min_nonzero.min((lhs - rhs).norm());
    }
    (free, min_nonzero)
}

/// Builds the kernel of the transition constraints for a function-like object whose components live at
/// Laurent level n + offset[component].
fn kernel(shape: &TorusShape, class: &FlatBundleClass, caps: KernelCaps, offsets: &[i64]) -> KernelReport {
    let cap = caps.laurent_cap as i64;
    let mut entries = Vec::new();
    let mut min_nonzero = f64::INFINITY;
    let mut unknowns = 0;
    for (component, off) in offsets.iter().enumerate() {
        for n in -cap..=cap {
            // level n of a function is a section of L^{−n}
            let (free, mn) = level_constraints(shape, &class.pow(-(n + off)), caps.mode_cap);
            unknowns += 2 * caps.mode_cap + 1;
            min_nonzero = min_nonzero.min(mn);
            entries.extend(free.into_iter().map(|mode| KernelEntry { level: n, mode, component }));
        }
    }
    KernelReport { caps, unknowns, dimension: entries.len(), kernel: entries, min_nonzero_constraint: min_nonzero }
}

fn require_non_torsion(class: &FlatBundleClass, caps: KernelCaps) -> Result<()> {
    let levels = 2 * caps.laurent_cap as u64 + 1;
    if let Some(n) = is_torsion_up_to(class, levels) {
        return Err(Error::TorsionClass { n });
    }
    for n in 1..=levels {
        let d = distance_to_trivial(&class.pow(n as i64));
        if d < caps.distance_floor {
            return Err(Error::Precondition(format!("L^{} lies {:e} from the trivial class, below floor {:e}", n, d, caps.distance_floor)));
        }
    }
    Ok(())
}

/// Kernel of Laurent–Fourier functions Σ c_{m,n} w^n e^{2πi(m+α_n)z} compatible with all transitions.
///
/// No torsion check; a trivial class gives a kernel that grows with the caps.
pub fn function_kernel(shape: &TorusShape, class: &FlatBundleClass, caps: KernelCaps) -> KernelReport {
    kernel(shape, class, caps, &[0])
}

/// Dimension of the space of global holomorphic functions on W*, truncated at the caps.
pub fn global_function_dim(datum: &GluingDatum, caps: KernelCaps) -> Result<usize> {
    require_non_torsion(&datum.class, caps)?;
    Ok(function_kernel(&datum.atlas.shape, &datum.class, caps).dimension)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldReport {
    pub kernel: KernelReport,
    /// Coefficients (a₁, a₂) of each kernel vector in the basis (w∂/∂w, ∂/∂z).
    pub basis: Vec<[f64; 2]>,
    /// w∂/∂w and ∂/∂z are preserved by every transition.
    pub chart_independent: bool,
    /// Factor by which f multiplies w∂/∂w.
    pub gluing_factor_theta1: i64,
}

/// Vector fields Σ w^n (p_n ∂/∂z + q_n ∂/∂w) on W* with p_n at level n and q_n at level n − 1.
pub fn vector_field_kernel(shape: &TorusShape, class: &FlatBundleClass, caps: KernelCaps) -> KernelReport {
    kernel(shape, class, caps, &[0, -1])
}

pub fn global_vector_field_basis(datum: &GluingDatum, caps: KernelCaps) -> Result<VectorFieldReport> {
    require_non_torsion(&datum.class, caps)?;
    let kernel = vector_field_kernel(&datum.atlas.shape, &datum.class, caps);
    let basis = kernel
        .kernel
        .iter()
        .map(|e| match (e.component, e.level, e.mode) {
            (1, 1, 0) => [1.0, 0.0],
            (0, 0, 0) => [0.0, 1.0],
            _ => [f64::NAN, f64::NAN],
        })
        .collect();
    // ψ_*(w∂/∂w) = e·w'∂/∂w' for ψ(w) = c·w^e
    let chart_independent = datum.transitions().iter().all(|m| m.fibre.log_derivative_factor() == 1);
    let gluing_factor_theta1 = datum.gluing_map().fibre.log_derivative_factor();
    Ok(VectorFieldReport { kernel, basis, chart_independent, gluing_factor_theta1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(class: FlatBundleClass) -> GluingDatum {
        GluingDatum::new(&TorusShape::square(), 9, &class, 2.0, 2.0, Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn golden_functions_are_constant() {
        let d = datum(FlatBundleClass::golden_mean());
        assert_eq!(global_function_dim(&d, KernelCaps::default()).unwrap(), 1);
        let rep = function_kernel(&d.atlas.shape, &d.class, KernelCaps::default());
        assert_eq!(rep.kernel, vec![KernelEntry { level: 0, mode: 0, component: 0 }]);
        assert!(rep.min_nonzero_constraint > 0.0);
    }

    #[test]
    fn torsion_rejected() {
        let d = datum(FlatBundleClass::rational((1, 2), (0, 1)));
        assert_eq!(global_function_dim(&d, KernelCaps::default()), Err(Error::TorsionClass { n: 2 }));
        assert!(global_vector_field_basis(&d, KernelCaps::default()).is_err());
    }

    #[test]
    fn near_torsion_rejected_by_floor() {
        let d = datum(FlatBundleClass::parse("0.50000000000001", "0").unwrap());
        assert!(matches!(global_function_dim(&d, KernelCaps::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn trivial_class_kernel_grows() {
        let shape = TorusShape::square();
        let t = FlatBundleClass::trivial();
        let small = function_kernel(&shape, &t, KernelCaps { laurent_cap: 4, ..Default::default() });
        let large = function_kernel(&shape, &t, KernelCaps { laurent_cap: 8, ..Default::default() });
        assert_eq!(small.dimension, 9);
        assert_eq!(large.dimension, 17);
    }

    #[test]
    fn golden_vector_fields() {
        let d = datum(FlatBundleClass::golden_mean());
        let rep = global_vector_field_basis(&d, KernelCaps::default()).unwrap();
        assert_eq!(rep.kernel.dimension, 2);
        assert!(rep.basis.contains(&[1.0, 0.0]) && rep.basis.contains(&[0.0, 1.0]));
        assert!(rep.chart_independent);
        assert_eq!(rep.gluing_factor_theta1, -1);
    }

    #[test]
    fn dimensions_stable_under_caps() {
        let d = datum(FlatBundleClass::float(0.3819660112501051, 0.2360679774997897));
        for cap in [4usize, 8, 12] {
            let caps = KernelCaps { mode_cap: cap, laurent_cap: cap, distance_floor: 1e-3 };
            let bigger = KernelCaps { mode_cap: cap + 4, laurent_cap: cap + 4, ..caps };
            assert_eq!(global_function_dim(&d, caps).unwrap(), global_function_dim(&d, bigger).unwrap());
            assert_eq!(global_vector_field_basis(&d, caps).unwrap().kernel.dimension, 2);
        }
    }
}
