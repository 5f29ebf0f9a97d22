use std::f64::consts::{E, PI};

use k3glue_core::surgery::{
    check_transitions, closed_form_volume, global_function_dim, global_vector_field_basis, leaf_density, pullback_two_form_check,
    quadrature_volume, GluingDatum, KernelCaps, LeviFlatLevel,
};
use k3glue_core::TorusShape;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{shape, ClassSpec, Command, GlueParams};
use crate::report::{Cell, Section, SectionReport};

pub fn run(p: &GlueParams, seed: u64) -> SectionReport {
    let mut s = Section::new(Command::Glue, seed);
    volume_checks(&mut s, p);
    let class_spec = p.class.clone().unwrap_or_else(ClassSpec::golden);
    let (Some(shape), Some(class)) = (s.attempt("shape", shape(p.tau.unwrap_or([0.0, 1.0]))), s.attempt("class", class_spec.parse())) else {
        return s.finish();
    };
    let g = Complex64::new(p.g_shift[0], p.g_shift[1]);
    let Some(datum) = s.attempt("gluing datum", GluingDatum::new(&shape, p.charts, &class, p.r_outer, p.r_prime, g)) else {
        return s.finish();
    };

    let tr = check_transitions(&datum);
    let failing: Vec<&str> = tr.checks.iter().filter(|c| !c.holds).map(|c| c.condition.as_str()).collect();
    s.check("transition conditions", tr.all_hold, format!("{} conditions, failing {:?}", tr.checks.len(), failing));
    s.table(
        "conditions",
        &["condition", "holds", "detail"],
        tr.checks.iter().map(|c| vec![c.condition.clone().into(), c.holds.into(), c.detail.clone().into()]).collect(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = 1.0 / p.r_prime;
    let samples: Vec<(Complex64, Complex64)> = (0..p.two_form_samples)
        .map(|_| {
            let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let w = Complex64::from_polar(rng.gen_range(lo..p.r_outer), rng.gen_range(0.0..std::f64::consts::TAU));
            (z, w)
        })
        .collect();
    let tf = pullback_two_form_check(&datum, &samples);
    let symbolic = tf.transition_factors.iter().all(|e| *e == 1) && tf.gluing_factor == -1 && tf.involution;
    s.check(
        "two-form symbolic",
        symbolic,
        format!("transition factors all 1: {}, gluing factor {}", tf.transition_factors.iter().all(|e| *e == 1), tf.gluing_factor),
    );
    s.check(
        "two-form numeric",
        tf.numeric_error <= p.two_form_tol && !samples.is_empty(),
        format!("worst deviation {:e} at {} samples (tolerance {:e})", tf.numeric_error, samples.len(), p.two_form_tol),
    );

    let mut kernel_rows = Vec::new();
    for &cap in &p.caps {
        let caps = KernelCaps { mode_cap: cap, laurent_cap: cap, distance_floor: p.distance_floor };
        if let Some(dim) = s.attempt(&format!("functions cap={}", cap), global_function_dim(&datum, caps)) {
            s.check(format!("functions cap={}", cap), dim == 1, format!("dimension {}", dim));
            kernel_rows.push(vec![cap.into(), "functions".into(), dim.into()]);
        }
        if let Some(vf) = s.attempt(&format!("vector fields cap={}", cap), global_vector_field_basis(&datum, caps)) {
            let dim = vf.kernel.dimension;
            s.check(
                format!("vector fields cap={}", cap),
                dim == 2 && vf.chart_independent && vf.gluing_factor_theta1 == -1,
                format!("dimension {}, basis {:?}, w-field factor under gluing {}", dim, vf.basis, vf.gluing_factor_theta1),
            );
            kernel_rows.push(vec![cap.into(), "vector_fields".into(), dim.into()]);
        }
    }
    s.table("kernels", &["cap", "kind", "dimension"], kernel_rows);

    if let Some(level) = s.attempt("leaf level", LeviFlatLevel::new(p.leaf.r, &datum)) {
        if let Some(rep) = s.attempt("leaf density", leaf_density(&level, &datum, p.leaf.n_iter, p.leaf.epsilon)) {
            s.check(
                "leaf density",
                rep.density_n.is_some() && level.well_defined(&datum),
                format!(
                    "epsilon-dense after {:?} steps, finite orbit {:?}, discrepancy slope {:.3}, N*D bound {:.3}",
                    rep.density_n, rep.finite_orbit, rep.slope, rep.c_constant
                ),
            );
            s.table("discrepancy", &["n", "star_discrepancy"], rep.discrepancy.iter().map(|(n, d)| vec![(*n).into(), (*d).into()]).collect());
        }
    }
    s.finish()
}

fn volume_checks(s: &mut Section, p: &GlueParams) {
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut worst: f64 = 0.0;
    for tau in &p.volume.taus {
        let Some(shape) = s.attempt("volume shape", shape(*tau)) else { continue };
        for [r, rp] in &p.volume.radii {
            let closed = closed_form_volume(&shape, *r, *rp);
            let quad = quadrature_volume(&shape, *r, *rp, 32);
            let rel = if closed == 0.0 { quad.abs() } else { ((quad - closed) / closed).abs() };
            worst = worst.max(rel);
            rows.push(vec![tau[0].into(), tau[1].into(), (*r).into(), (*rp).into(), closed.into(), quad.into(), rel.into()]);
        }
    }
    s.check(
        "volume quadrature",
        worst <= p.volume.rel_tol && !rows.is_empty(),
        format!("{} cases, worst relative error {:e} (tolerance {:e})", rows.len(), worst, p.volume.rel_tol),
    );
    s.table("volume", &["tau_re", "tau_im", "r", "r_prime", "closed_form", "quadrature", "relative_error"], rows);
    let v = closed_form_volume(&TorusShape::square(), E, 1.0);
    s.check("volume tau=i, rr'=e", ((v - 8.0 * PI) / (8.0 * PI)).abs() < 1e-14, format!("{} against 8 pi = {}", v, 8.0 * PI));
}
