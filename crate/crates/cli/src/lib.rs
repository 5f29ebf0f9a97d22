//! Command-line front end: scenario configs in, JSON and CSV reports out.

pub mod config;
pub mod report;
pub mod sections;

use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use config::{Command, FullReportParams, Parameters, ScenarioConfig};
use report::{config_hash, RunReport, SectionReport, Timing, Verdict};

/// Seed for one section, derived from the run seed and the section name.
pub fn section_seed(seed: u64, command: Command) -> u64 {
    let h = Sha256::digest(command.name().as_bytes());
    seed ^ u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

fn run_section(params: &Parameters, seed: u64) -> SectionReport {
    match params {
        Parameters::Dioph(p) => sections::dioph::run(p, seed),
        Parameters::Ueda(p) => sections::ueda::run(p, seed),
        Parameters::Linearize(p) => sections::linearize::run(p, seed),
        Parameters::Glue(p) => sections::glue::run(p, seed),
        Parameters::Ks(p) => sections::ks::run(p, seed),
        Parameters::Lattice(p) => sections::lattice::run(p, seed),
        Parameters::FullReport(_) => unreachable!("full report is not a section"),
    }
}

fn full_report_sections(p: &FullReportParams) -> Vec<(Command, Parameters)> {
    vec![
        (Command::Dioph, Parameters::Dioph(p.dioph.clone())),
        (Command::Ueda, Parameters::Ueda(p.ueda.clone())),
        (Command::Linearize, Parameters::Linearize(p.linearize.clone())),
        (Command::Glue, Parameters::Glue(p.glue.clone())),
        (Command::Ks, Parameters::Ks(p.ks.clone())),
        (Command::Lattice, Parameters::Lattice(p.lattice.clone())),
    ]
}

/// Runs a config; independent sections run in parallel and are assembled in a fixed order.
pub fn run(config: &ScenarioConfig) -> (RunReport, Timing) {
    let start = Instant::now();
    let jobs: Vec<(Command, Option<Parameters>)> = match &config.parameters {
        Parameters::FullReport(p) => {
            full_report_sections(p).into_iter().map(|(c, params)| (c, (!p.disabled.contains(&c)).then_some(params))).collect()
        }
        params => vec![(config.command, Some(params.clone()))],
    };
    let results: Vec<(SectionReport, f64)> = jobs
        .par_iter()
        .map(|(c, params)| {
            let t = Instant::now();
            let seed = section_seed(config.seed, *c);
            let rep = match params {
                Some(p) => run_section(p, seed),
                None => SectionReport::skipped(*c, seed),
            };
            (rep, t.elapsed().as_secs_f64())
        })
        .collect();
    let timing = Timing {
        total_seconds: start.elapsed().as_secs_f64(),
        sections: results.iter().map(|(r, t)| (r.name.clone(), *t)).collect(),
    };
    let sections: Vec<SectionReport> = results.into_iter().map(|(r, _)| r).collect();
    let verdict = Verdict::combine(sections.iter().map(|s| s.verdict));
    let report = RunReport { command: config.command, config_hash: config_hash(config), seed: config.seed, verdict, sections };
    (report, timing)
}
