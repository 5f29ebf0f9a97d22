use k3glue_core::cover_cech::atlas::build_cover;
use k3glue_core::cover_cech::{schwarz_pick_s, ueda_constants};
use k3glue_core::exact::{parse_rational, rational_to_f64};
use k3glue_core::linearizer::{
    majorant_extension, majorant_hat, majorant_schroder, power_divisors, radius_estimate, schroder_domination, schroder_solve,
    substitution_residual, synthetic_perturbation, BandAtlas, SolverOptions,
};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::config::{shape, ClassSpec, Command, LinearizeParams};
use crate::report::{Section, SectionReport};

pub fn run(p: &LinearizeParams, seed: u64) -> SectionReport {
    let mut s = Section::new(Command::Linearize, seed);
    let class_spec = p.class.clone().unwrap_or_else(ClassSpec::golden);
    let (Some(shape), Some(class)) = (s.attempt("shape", shape(p.tau.unwrap_or([0.0, 1.0]))), s.attempt("class", class_spec.parse())) else {
        return s.finish();
    };

    if let Some(atlas) = s.attempt("band atlas", BandAtlas::new(&shape, p.bands)) {
        let input = synthetic_perturbation(&class, &atlas, p.max_mu, p.eps, seed);
        if let Some(sol) = s.attempt("schroder solve", schroder_solve(&input, &atlas, p.order, SolverOptions::default())) {
            let res = substitution_residual(&sol, &input, &atlas, p.residual_samples);
            let worst = res.iter().cloned().fold(0.0, f64::max);
            s.check(
                "substitution residual",
                res.iter().all(|r| *r < p.residual_tol),
                format!("worst residual {:e} over orders 0..={} (tolerance {:e})", worst, p.order, p.residual_tol),
            );
            s.table("residuals", &["order", "residual"], res.iter().enumerate().map(|(nu, r)| vec![nu.into(), (*r).into()]).collect());
            if let Some(rep) = s.attempt("majorant domination", schroder_domination(&sol, &input, &atlas, p.disk_charts)) {
                let bad: Vec<usize> = rep.rows.iter().filter(|r| !r.holds).map(|r| r.order).collect();
                s.check("majorant domination", rep.holds, format!("K = {:e}, M = {}, Q = {}, failing orders {:?}", rep.k, rep.m, rep.q, bad));
                s.table(
                    "domination",
                    &["order", "sup", "ln_sup", "ln_majorant", "holds"],
                    rep.rows.iter().map(|r| vec![r.order.into(), r.sup.into(), r.sup.ln().into(), r.ln_bound.into(), r.holds.into()]).collect(),
                );
            }
        }
    }

    // exact majorant identities with K from the disk cover of the same torus
    let order = p.majorant_order;
    let k = build_cover(&shape, p.disk_charts).and_then(|a| schwarz_pick_s(a.ratio())).and_then(|sv| ueda_constants(sv, p.disk_charts));
    let (Some(c), Some(q), Some(m), Some(d)) = (
        s.attempt("majorant constants", k),
        s.attempt("majorant_q", parse_rational(&p.majorant_q)),
        s.attempt("majorant_m", parse_rational(&p.majorant_m)),
        s.attempt("divisors", power_divisors(&class, order)),
    ) else {
        return s.finish();
    };
    let k = c.k;
    let two = BigRational::from_integer(BigInt::from(2));
    if let Some(a) = s.attempt("schroder majorant", majorant_schroder(&k, &m, &d, order)) {
        s.check("A2 = KM/d1", a.coefficients[2] == &k * &m / &d[0], format!("A2 = {:e}", rational_to_f64(&a.coefficients[2])));
        if let Some(r) = s.attempt("schroder radius", radius_estimate(&a, 1, order)) {
            s.check("schroder radius positive", r.radius > 0.0, format!("radius {:e}", r.radius));
        }
    }
    if let Some(a) = s.attempt("extension majorant", majorant_extension(&k, &q, &m, &d, order)) {
        s.check("A1 = 2KQM/d1", a.coefficients[1] == &two * &k * &q * &m / &d[0], format!("A1 = {:e}", rational_to_f64(&a.coefficients[1])));
        if let Some(r) = s.attempt("extension radius", radius_estimate(&a, 1, order)) {
            s.check("extension radius positive", r.radius > 0.0, format!("radius {:e}", r.radius));
        }
    }
    if let Some(h) = s.attempt("hat majorant", majorant_hat(&k, &q, &m, &d, order)) {
        let dominated = (2..=order).all(|nu| h.hat.coefficients[nu] >= h.b[nu]);
        let min_margin = h.log_margins.iter().cloned().fold(f64::INFINITY, f64::min);
        s.check("hat dominates", dominated, format!("orders 2..={}, min ln margin {:e}", order, min_margin));
        if let Some(r) = s.attempt("hat radius", radius_estimate(&h.hat, 1, order)) {
            s.check("hat radius positive", r.radius > 0.0, format!("radius {:e}", r.radius));
        }
        s.table(
            "majorants",
            &["order", "ln_hat", "ln_b"],
            (2..=order).map(|nu| vec![nu.into(), h.hat.ln_coefficient(nu).into(), k3glue_core::exact::ln_rational_abs(&h.b[nu]).into()]).collect(),
        );
    }
    s.finish()
}
