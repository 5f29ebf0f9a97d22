use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::atlas::{build_cover, CoverAtlas};
use super::cochain::{delta, norm0, norm1, Cochain0};
use super::cocycle::{cocycle_distance, cocycle_distance_detail, restriction_cocycle, FlatCocycle};
use crate::error::{Error, Result};
use crate::exact::{rational_from_f64, rational_to_f64};
use crate::torus_pic::{FlatBundleClass, TorusShape};

/// Pseudo-hyperbolic diameter 2ρ/(1+ρ²) of the disk of radius ρ in the unit disk.
pub fn schwarz_pick_s(rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("radius ratio must lie in [0, 1), got {}", rho)));
    }
    Ok(2.0 * rho / (1.0 + rho * rho))
}

pub fn schwarz_pick_s_exact(rho: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    &two * rho / (BigRational::one() + rho * rho)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UedaConstants {
    pub n_charts: usize,
    pub s: BigRational,
    pub l1: BigRational,
    pub l2: BigRational,
    pub k1: BigRational,
    pub k2: BigRational,
    pub k: BigRational,
}

impl UedaConstants {
    pub fn k_f64(&self) -> f64 {
        rational_to_f64(&self.k)
    }

    /// 1 + 2·(2/(1−s))^{N+2}.
    pub fn upper_bound(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        let base = &two / (BigRational::one() - &self.s);
        BigRational::one() + &two * num_traits::pow(base, self.n_charts + 2)
    }

    pub fn bound_holds(&self) -> bool {
        self.k < self.upper_bound()
    }

    pub fn as_f64(&self) -> [f64; 6] {
        [&self.s, &self.l1, &self.l2, &self.k1, &self.k2, &self.k].map(rational_to_f64)
    }
}

pub fn ueda_constants_exact(s: &BigRational, n_charts: usize) -> Result<UedaConstants> {
    let zero = BigRational::from_integer(BigInt::from(0));
    if *s <= zero || *s >= BigRational::one() {
        return Err(Error::Domain(format!("s must lie in (0, 1), got {}", s)));
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let l1 = &two * s / (&one - s);
    let l2 = (&one + s) / (&one - s);
    let pow = num_traits::pow(&l2 + &one, n_charts);
    let k1 = &l1 * &l2 * &pow;
    let k2 = &l2 * &pow;
    let k = &one + &two * &k1 + &two * &k2;
    let c = UedaConstants { n_charts, s: s.clone(), l1, l2, k1, k2, k };
    debug_assert!(c.bound_holds());
    Ok(c)
}

/// Constants from a floating s, converted to its exact binary value first.
pub fn ueda_constants(s: f64, n_charts: usize) -> Result<UedaConstants> {
    ueda_constants_exact(&rational_from_f64(s)?, n_charts)
}

/// Constants for an atlas from its inner/outer radius ratio.
pub fn atlas_constants(atlas: &CoverAtlas) -> Result<UedaConstants> {
    ueda_constants(schwarz_pick_s(atlas.ratio())?, atlas.n_charts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UedaCheck {
    pub holds: bool,
    pub slack: f64,
    pub distance: f64,
    pub norm_f: f64,
    pub norm_delta_f: f64,
    pub k: f64,
}

/// Evaluates d(𝕀, E)·‖f‖ ≤ K·‖δf‖.
pub fn verify_ueda_inequality(f: &Cochain0, e: &FlatCocycle, consts: &UedaConstants, atlas: &CoverAtlas) -> UedaCheck {
    verify_with_distance(f, e, consts, atlas, cocycle_distance(e))
}

pub fn verify_with_distance(f: &Cochain0, e: &FlatCocycle, consts: &UedaConstants, atlas: &CoverAtlas, distance: f64) -> UedaCheck {
    let norm_f = norm0(f, atlas);
    let norm_delta_f = norm1(&delta(f, e, atlas), atlas);
    let k = consts.k_f64();
    let lhs = distance * norm_f;
    let rhs = k * norm_delta_f;
    UedaCheck { holds: lhs <= rhs, slack: rhs - lhs, distance, norm_f, norm_delta_f, k }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub norm_f: f64,
    pub norm_delta_f: f64,
    pub distance: f64,
    pub k: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Randomized inequality trials on one atlas; trial i uses its own seeded stream.
///
/// Even trials draw random polynomial cochains of degree ≤ max_degree; odd
/// trials perturb the optimal unit gauge of E, where ‖δf‖ is smallest.
pub fn ueda_trials(shape: &TorusShape, n_charts: usize, trials: usize, max_degree: usize, seed: u64) -> Result<Vec<TrialRecord>> {
    let atlas = build_cover(shape, n_charts)?;
    let consts = atlas_constants(&atlas)?;
    let r = atlas.outer_radius;
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let class = FlatBundleClass::float(rng.gen_range(-0.5..0.5) * rng.gen::<f64>(), rng.gen_range(-0.5..0.5) * rng.gen::<f64>());
            let e = restriction_cocycle(&class, &atlas, 1);
            let detail = cocycle_distance_detail(&e);
            let degree = rng.gen_range(0..=max_degree);
            let f = if trial % 2 == 0 {
                let charts = (0..n_charts)
                    .map(|_| {
                        (0..=degree)
                            .map(|m| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / r.powi(m as i32))
                            .collect()
                    })
                    .collect();
                Cochain0 { charts }
            } else {
                let eps = 10f64.powf(rng.gen_range(-6.0..-1.0));
                let charts = detail
                    .phases
                    .iter()
                    .map(|&th| {
                        let mut p = vec![Complex64::from_polar(1.0, th)];
                        for m in 1..=degree {
                            p.push(Complex64::new(rng.gen_range(-eps..eps), rng.gen_range(-eps..eps)) / r.powi(m as i32));
                        }
                        p
                    })
                    .collect();
                Cochain0 { charts }
            };
            let c = verify_with_distance(&f, &e, &consts, &atlas, detail.distance);
            TrialRecord {
                trial,
                norm_f: c.norm_f,
                norm_delta_f: c.norm_delta_f,
                distance: c.distance,
                k: c.k,
                slack: c.slack,
                holds: c.holds,
            }
        })
        .collect();
    Ok(records)
}

/// Möbius automorphism of the unit disk sending a to 0, times a unit rotation.
pub fn mobius(a: Complex64, rot: Complex64, z: Complex64) -> Complex64 {
    rot * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}
