use std::fmt;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Command, ScenarioConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates, then pass; an all-skipped list is skipped.
    pub fn combine<I: IntoIterator<Item = Verdict>>(vs: I) -> Self {
        let mut out = Verdict::Skipped;
        for v in vs {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Pass => out = Verdict::Pass,
                Verdict::Skipped => {}
            }
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(x) => write!(f, "{}", x),
            Cell::Num(x) => write!(f, "{:e}", x),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub name: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl SectionReport {
    pub fn skipped(command: Command, seed: u64) -> Self {
        SectionReport {
            name: command.name().into(),
            seed,
            verdict: Verdict::Skipped,
            checks: vec![Check { name: "section".into(), verdict: Verdict::Skipped, detail: "disabled in config".into() }],
            tables: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Collects checks and tables while a section runs.
pub struct Section {
    name: String,
    seed: u64,
    checks: Vec<Check>,
    tables: Vec<Table>,
}

impl Section {
    pub fn new(command: Command, seed: u64) -> Self {
        Section { name: command.name().into(), seed, checks: Vec::new(), tables: Vec::new() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), verdict: Verdict::from_bool(ok), detail: detail.into() });
        ok
    }

    /// Records a failing check for an error, keeping the section going.
    pub fn attempt<T>(&mut self, name: &str, r: k3glue_core::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks.push(Check { name: name.into(), verdict: Verdict::Fail, detail: format!("{:?}: {}", e, e) });
                None
            }
        }
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<Cell>>) {
        self.tables.push(Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows });
    }

    pub fn finish(self) -> SectionReport {
        let verdict = if self.checks.is_empty() { Verdict::Fail } else { Verdict::combine(self.checks.iter().map(|c| c.verdict)) };
        SectionReport { name: self.name, seed: self.seed, verdict, checks: self.checks, tables: self.tables }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Command,
    pub config_hash: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub sections: Vec<SectionReport>,
}

impl RunReport {
    pub fn section(&self, name: &str) -> Option<&SectionReport> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// 0 when no verdict fails, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Fail {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes report.json and one RFC-4180 CSV per table.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        for s in &self.sections {
            for t in &s.tables {
                let mut w = csv::Writer::from_path(dir.join(format!("{}_{}.csv", s.name, t.name)))?;
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(ToString::to_string))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// SHA-256 of the resolved command, parameters and seed in canonical JSON; the output path is left out.
pub fn config_hash(config: &ScenarioConfig) -> String {
    let text = serde_json::to_string(&(config.command, &config.parameters, config.seed)).expect("config serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub sections: Vec<(String, f64)>,
}
