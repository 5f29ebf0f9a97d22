use k3glue_core::exact::Coord;
use k3glue_core::torus_pic::{convergent_denominators, diophantine_estimate};

use crate::config::{Command, DiophParams};
use crate::report::{Section, SectionReport};

pub fn run(p: &DiophParams, seed: u64) -> SectionReport {
    let mut s = Section::new(Command::Dioph, seed);
    let mut rows = Vec::new();
    for case in &p.cases {
        let Some(class) = s.attempt(&format!("{} class", case.name), case.class.parse()) else { continue };
        let Some(rep) = s.attempt(&format!("{} estimate", case.name), diophantine_estimate(&class, case.n_max, case.exponent_cap)) else { continue };
        let expected = case.expect_pass.unwrap_or(true);
        s.check(
            format!("{} exponent", case.name),
            rep.passes == expected,
            format!(
                "fitted exponent {:.4} against cap {} over n <= {} ({} expected)",
                rep.fitted_exponent,
                case.exponent_cap,
                case.n_max,
                if expected { "pass" } else { "fail" }
            ),
        );
        // best approximations of a rational a-coordinate are its convergent denominators
        if let (Coord::Exact(a), true) = (&class.a, class.b.is_zero()) {
            let conv = convergent_denominators(a, case.n_max);
            s.check(
                format!("{} records match convergents", case.name),
                conv == rep.record_n,
                format!("{} records, {} convergents", rep.record_n.len(), conv.len()),
            );
        }
        for &n in &rep.record_n {
            let d = rep.samples[(n - 1) as usize].1;
            rows.push(vec![case.name.clone().into(), n.into(), d.into()]);
        }
    }
    s.table("records", &["case", "n", "distance"], rows);
    s.finish()
}
