//! End-to-end acceptance suite: one pass/fail line per criterion.

use std::process::ExitCode;

use k3glue_cli::config::{
    ClassSpec, Command, DiophCase, DiophParams, FullReportParams, GlueParams, KsParams, LatticeParams, LinearizeParams, Parameters, ScenarioConfig,
    UedaParams, VolumeParams,
};
use k3glue_cli::report::{RunReport, Verdict};
use k3glue_cli::run;
use k3glue_core::torus_pic::LIOUVILLE_30;

fn config() -> ScenarioConfig {
    let golden = ClassSpec::golden();
    let mut p = FullReportParams {
        dioph: DiophParams {
            cases: vec![
                DiophCase { name: "golden".into(), class: golden.clone(), n_max: 10_000, exponent_cap: 1.2, expect_pass: Some(true) },
                DiophCase {
                    name: "truncated-liouville".into(),
                    class: ClassSpec { a: LIOUVILLE_30.into(), b: "0".into() },
                    n_max: 1_000_000,
                    exponent_cap: 3.0,
                    expect_pass: Some(false),
                },
            ],
        },
        ueda: UedaParams { charts: (4..=9).collect(), trials: 200, grid_points: 20, exact_s: "1/3".into(), exact_charts: 3, ..Default::default() },
        linearize: LinearizeParams { class: Some(golden.clone()), order: 12, residual_tol: 1e-10, majorant_order: 30, ..Default::default() },
        glue: GlueParams {
            class: Some(golden.clone()),
            caps: vec![8, 12],
            two_form_samples: 100,
            two_form_tol: 1e-14,
            volume: VolumeParams {
                taus: vec![[0.0, 1.0], [0.0, 2.0], [0.5, 0.75f64.sqrt()]],
                radii: vec![[std::f64::consts::E, 1.0], [1.0, 1.0], [2.0, 3.0], [1.5, 1.2], [1.25, 4.0]],
                rel_tol: 1e-6,
            },
            ..Default::default()
        },
        ks: KsParams { class: Some(golden), parameter_points: 20, min_order: 1.9, point_counts: (4..=9).collect(), ..Default::default() },
        lattice: LatticeParams { span_counts: (1..=22).collect(), dim_t: 18, ..Default::default() },
        ..Default::default()
    };
    p.resolve();
    ScenarioConfig { command: Command::FullReport, parameters: Parameters::FullReport(p), seed: 2024, output_path: None }
}

/// All named checks of a section pass; a missing check counts as a failure.
fn checks(report: &RunReport, section: &str, names: &[&str]) -> (bool, String) {
    let Some(s) = report.section(section) else { return (false, format!("no section {}", section)) };
    let mut bad = Vec::new();
    for n in names {
        match s.check(n) {
            Some(c) if c.verdict == Verdict::Pass => {}
            Some(c) => bad.push(format!("{} ({})", n, c.detail)),
            None => bad.push(format!("{} missing", n)),
        }
    }
    (bad.is_empty(), if bad.is_empty() { format!("{} checks", names.len()) } else { bad.join("; ") })
}

fn section_passes(report: &RunReport, section: &str) -> (bool, String) {
    match report.section(section) {
        Some(s) => {
            let failing: Vec<&str> = s.checks.iter().filter(|c| c.verdict != Verdict::Pass).map(|c| c.name.as_str()).collect();
            (s.verdict == Verdict::Pass, format!("{} checks, failing {:?}", s.checks.len(), failing))
        }
        None => (false, format!("no section {}", section)),
    }
}

fn within(ok: (bool, String), seconds: f64, budget: f64) -> (bool, String) {
    (ok.0 && seconds < budget, format!("{}; {:.1} s of {} s", ok.1, seconds, budget))
}

fn main() -> ExitCode {
    let config = config();
    let (report, timing) = run(&config);
    let secs = |name: &str| timing.sections.iter().find(|(n, _)| n == name).map_or(f64::INFINITY, |(_, t)| *t);
    let ueda_inequality: Vec<String> = (4..=9).map(|n| format!("inequality N={}", n)).collect();
    let mut c1: Vec<&str> = ueda_inequality.iter().map(String::as_str).collect();
    c1.push("bound grid");

    let (again, _) = run(&config);
    let first = report.to_json();
    let identical = first == again.to_json();

    let results: Vec<(&str, (bool, String))> = vec![
        ("Ueda inequality suite", within(checks(&report, "ueda", &c1), secs("ueda"), 60.0)),
        ("effective constants", checks(&report, "ueda", &["exact constants"])),
        ("Diophantine estimation", within(section_passes(&report, "dioph"), secs("dioph"), 10.0)),
        ("linearization", within(checks(&report, "linearize", &["substitution residual", "majorant domination"]), secs("linearize"), 120.0)),
        (
            "majorant identities",
            checks(
                &report,
                "linearize",
                &["A2 = KM/d1", "A1 = 2KQM/d1", "hat dominates", "schroder radius positive", "extension radius positive", "hat radius positive"],
            ),
        ),
        (
            "surgery identities",
            checks(
                &report,
                "glue",
                &["two-form symbolic", "two-form numeric", "functions cap=8", "vector fields cap=8", "functions cap=12", "vector fields cap=12"],
            ),
        ),
        ("volume bound", checks(&report, "glue", &["volume quadrature", "volume tau=i, rr'=e"])),
        (
            "Kodaira-Spencer cocycles",
            checks(&report, "ks", &["fibre cocycle is w_dw/t0", "fibre cocycle difference order", "translation cocycle is d/dz"]),
        ),
        ("dimension formula", checks(&report, "ks", &["tangent cohomology (0, 2N-8, 0)", "tangent cohomology N=9"])),
        ("lattice suite", section_passes(&report, "lattice")),
        (
            "fixed loci",
            checks(
                &report,
                "ks",
                &["fixed locus identity", "fixed locus distinct eigenvalues", "fixed locus repeated eigenvalue", "fermat fixed points", "automorphism bound"],
            ),
        ),
        ("determinism", (identical, format!("{} bytes, hash {}", first.len(), report.config_hash))),
    ];

    let mut all = true;
    for (i, (name, (ok, detail))) in results.iter().enumerate() {
        all &= ok;
        println!("criterion {:>2} {:<26} {}  {}", i + 1, name, if *ok { "PASS" } else { "FAIL" }, detail);
    }
    println!("total wall time {:.1} s", timing.total_seconds);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
