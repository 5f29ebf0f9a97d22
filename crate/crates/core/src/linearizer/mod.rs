//! Power-series solvers for linearizing a neighbourhood of the elliptic curve.

pub mod bands;
pub mod extension;
pub mod majorant;
pub mod qps;
pub mod schroder;

pub use bands::{solve_delta_bundle, solve_delta_forward, BandAtlas, CochainEntry, DeltaOptions, DeltaSolution};
pub use extension::{extension_residual, extension_solve, synthetic_extension, ExtensionInput, ExtensionSolution};
pub use majorant::{
    majorant_extension, majorant_hat, majorant_schroder, radius_estimate, HatComparison, MajorantKind, MajorantSeries, RadiusEstimate,
};
pub use qps::QpSeries;
pub use schroder::{
    schroder_solve, substitution_residual, synthetic_perturbation, OrderDiagnostics, SchroderInput, SchroderSolution, SolverOptions,
    VerticalSeries,
};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cover_cech::{build_cover, ueda_constants};
use crate::cover_cech::schwarz_pick_s;
use crate::error::Result;
use crate::exact::{rational_from_f64, Coord};
use crate::torus_pic::{invariant_distance_coord, FlatBundleClass};

/// Exact d(𝕀, L^ν) for ν = 1..=count.
pub fn power_divisors(l: &FlatBundleClass, count: usize) -> Result<Vec<BigRational>> {
    (1..=count as i64)
        .map(|n| match invariant_distance_coord(&l.pow(n), &FlatBundleClass::trivial()) {
            Coord::Exact(d) => Ok(d),
            Coord::Float(d) => rational_from_f64(d),
        })
        .collect()
}

/// Smallest Q ≥ 1 with ρ + Σ_μ s_μ·ρ^μ ≤ 1 at ρ = 1/Q, where s_μ bounds the μ-th term.
pub fn containment_q(bounds: &[f64]) -> f64 {
    let f = |rho: f64| rho + bounds.iter().enumerate().map(|(i, s)| s * rho.powi(i as i32 + 2)).sum::<f64>();
    if f(1.0) <= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 / lo
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationRow {
    pub order: usize,
    /// Largest sup of a chart coefficient over the inner bands.
    pub sup: f64,
    pub ln_bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub k: f64,
    pub m: f64,
    pub q: f64,
    /// Sup norms are taken on the inner bands.
    pub norm_domain: String,
    pub rows: Vec<DominationRow>,
    pub holds: bool,
}

/// Compares each computed f_{j|ν} with A_ν from the Schröder majorant.
///
/// K comes from the disk cover of the same torus with `disk_charts` charts.
pub fn schroder_domination(sol: &SchroderSolution, input: &SchroderInput, atlas: &BandAtlas, disk_charts: usize) -> Result<DominationReport> {
    let order = sol.series.truncation_order;
    let disk = build_cover(&atlas.shape, disk_charts)?;
    let consts = ueda_constants(schwarz_pick_s(disk.ratio())?, disk_charts)?;
    let sups: Vec<f64> = (2..=order)
        .map(|mu| input.perturbation.iter().map(|ps| ps.get(mu - 2).map_or(0.0, |p| p.sup_on_lines(&atlas.overlap_lines()))).fold(0.0, f64::max))
        .collect();
    let q = containment_q(&sups);
    let m = 2.0 * q.max(input.grid_sup(atlas));
    let divisors = power_divisors(&input.class, order)?;
    let maj = majorant_schroder(&consts.k, &rational_from_f64(m)?, &divisors, order)?;
    let rows: Vec<DominationRow> = (2..=order)
        .map(|nu| {
            let sup = sol.series.charts.iter().map(|c| c[nu].sup_on_lines(&atlas.inner_lines())).fold(0.0, f64::max);
            let ln_bound = maj.ln_coefficient(nu);
            DominationRow { order: nu, sup, ln_bound, holds: sup == 0.0 || sup.ln() <= ln_bound }
        })
        .collect();
    let holds = rows.iter().all(|r| r.holds);
    Ok(DominationReport { k: consts.k_f64(), m, q, norm_domain: "inner bands".into(), rows, holds })
}
