//! Scenario configs: an envelope with a command and its typed parameter block.

use std::fmt;

use clap::ValueEnum;
use k3glue_core::torus_pic::{GOLDEN_MEAN_30, LIOUVILLE_30};
use k3glue_core::{FlatBundleClass, TorusShape};
use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Dioph,
    Ueda,
    Linearize,
    Glue,
    Ks,
    Lattice,
    FullReport,
}

impl Command {
    pub const SECTIONS: [Command; 6] = [Command::Dioph, Command::Ueda, Command::Linearize, Command::Glue, Command::Ks, Command::Lattice];

    pub fn name(self) -> &'static str {
        match self {
            Command::Dioph => "dioph",
            Command::Ueda => "ueda",
            Command::Linearize => "linearize",
            Command::Glue => "glue",
            Command::Ks => "ks",
            Command::Lattice => "lattice",
            Command::FullReport => "full-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A flat bundle class as two rational strings ("p/q" or a finite decimal).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub a: String,
    pub b: String,
}

impl ClassSpec {
    pub fn golden() -> Self {
        ClassSpec { a: GOLDEN_MEAN_30.into(), b: "0".into() }
    }

    pub fn parse(&self) -> k3glue_core::Result<FlatBundleClass> {
        FlatBundleClass::parse(&self.a, &self.b)
    }
}

/// Shape parameter τ as [re, im].
pub type TauSpec = [f64; 2];

pub fn shape(tau: TauSpec) -> k3glue_core::Result<TorusShape> {
    TorusShape::new(Complex64::new(tau[0], tau[1]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DiophCase {
    pub name: String,
    pub class: ClassSpec,
    pub n_max: u64,
    pub exponent_cap: f64,
    /// Expected outcome; when absent the case must pass.
    #[serde(default)]
    pub expect_pass: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct DiophParams {
    pub cases: Vec<DiophCase>,
}

impl Default for DiophParams {
    fn default() -> Self {
        DiophParams {
            cases: vec![
                DiophCase { name: "golden".into(), class: ClassSpec::golden(), n_max: 10_000, exponent_cap: 1.2, expect_pass: Some(true) },
                DiophCase {
                    name: "truncated-liouville".into(),
                    class: ClassSpec { a: LIOUVILLE_30.into(), b: "0".into() },
                    n_max: 1_000_000,
                    exponent_cap: 3.0,
                    expect_pass: Some(false),
                },
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct UedaParams {
    pub tau: Option<TauSpec>,
    pub charts: Vec<usize>,
    pub trials: usize,
    pub max_degree: usize,
    /// s runs over k/(grid_points + 1) for k = 1..=grid_points.
    pub grid_points: usize,
    pub exact_s: String,
    pub exact_charts: usize,
}

impl Default for UedaParams {
    fn default() -> Self {
        UedaParams { tau: None, charts: (4..=9).collect(), trials: 200, max_degree: 8, grid_points: 20, exact_s: "1/3".into(), exact_charts: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct LinearizeParams {
    pub tau: Option<TauSpec>,
    pub class: Option<ClassSpec>,
    pub bands: usize,
    pub order: usize,
    /// Highest power with a nonzero perturbation coefficient.
    pub max_mu: usize,
    pub eps: f64,
    pub residual_samples: usize,
    pub residual_tol: f64,
    pub disk_charts: usize,
    pub majorant_order: usize,
    pub majorant_q: String,
    pub majorant_m: String,
}

impl Default for LinearizeParams {
    fn default() -> Self {
        LinearizeParams {
            tau: None,
            class: None,
            bands: 3,
            order: 12,
            max_mu: 3,
            eps: 0.1,
            residual_samples: 8,
            residual_tol: 1e-10,
            disk_charts: 9,
            majorant_order: 30,
            majorant_q: "2".into(),
            majorant_m: "3".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct LeafParams {
    pub r: f64,
    pub n_iter: usize,
    pub epsilon: f64,
}

impl Default for LeafParams {
    fn default() -> Self {
        LeafParams { r: 1.0, n_iter: 4096, epsilon: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct VolumeParams {
    pub taus: Vec<TauSpec>,
    /// (r, r') pairs with r, r' ≥ 1.
    pub radii: Vec<[f64; 2]>,
    pub rel_tol: f64,
}

impl Default for VolumeParams {
    fn default() -> Self {
        VolumeParams {
            taus: vec![[0.0, 1.0], [0.0, 2.0], [0.5, 0.75f64.sqrt()]],
            radii: vec![[std::f64::consts::E, 1.0], [1.0, 1.0], [2.0, 3.0], [1.5, 1.2], [1.25, 4.0]],
            rel_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct GlueParams {
    pub tau: Option<TauSpec>,
    pub class: Option<ClassSpec>,
    pub charts: usize,
    pub r_outer: f64,
    pub r_prime: f64,
    pub g_shift: [f64; 2],
    /// Mode and Laurent caps for the kernel computations.
    pub caps: Vec<usize>,
    pub distance_floor: f64,
    pub two_form_samples: usize,
    pub two_form_tol: f64,
    pub leaf: LeafParams,
    pub volume: VolumeParams,
}

impl Default for GlueParams {
    fn default() -> Self {
        GlueParams {
            tau: None,
            class: None,
            charts: 9,
            r_outer: 2.0,
            r_prime: 2.0,
            g_shift: [0.1, 0.05],
            caps: vec![8, 12],
            distance_floor: 1e-9,
            two_form_samples: 100,
            two_form_tol: 1e-14,
            leaf: LeafParams::default(),
            volume: VolumeParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct KsParams {
    pub tau: Option<TauSpec>,
    pub class: Option<ClassSpec>,
    pub r_outer: f64,
    pub r_prime: f64,
    pub g_shift: [f64; 2],
    pub parameter_points: usize,
    pub steps: [f64; 2],
    pub min_order: f64,
    pub point_counts: Vec<usize>,
    pub separation_samples: usize,
}

impl Default for KsParams {
    fn default() -> Self {
        KsParams {
            tau: None,
            class: None,
            r_outer: 2.0,
            r_prime: 3.0,
            g_shift: [0.1, -0.2],
            parameter_points: 20,
            steps: [1e-3, 5e-4],
            min_order: 1.9,
            point_counts: (4..=9).collect(),
            separation_samples: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeParams {
    /// Span-set sizes tried with random rational vectors.
    pub span_counts: Vec<usize>,
    /// Numerators and denominators of random entries are bounded by this.
    pub entry_bound: i64,
    /// Extra user-supplied span vectors, entries as rational strings.
    pub spans: Option<Vec<Vec<String>>>,
    pub dim_t: i64,
}

impl Default for LatticeParams {
    fn default() -> Self {
        LatticeParams { span_counts: (1..=22).collect(), entry_bound: 3, spans: None, dim_t: 18 }
    }
}

/// Values inherited by sections that leave them unset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct SharedParams {
    pub tau: Option<TauSpec>,
    pub class: Option<ClassSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct FullReportParams {
    pub shared: SharedParams,
    pub disabled: Vec<Command>,
    pub dioph: DiophParams,
    pub ueda: UedaParams,
    pub linearize: LinearizeParams,
    pub glue: GlueParams,
    pub ks: KsParams,
    pub lattice: LatticeParams,
}

impl FullReportParams {
    /// Fills unset τ and class fields from the shared block, then from the defaults.
    pub fn resolve(&mut self) {
        let tau = self.shared.tau.unwrap_or([0.0, 1.0]);
        let class = self.shared.class.clone().unwrap_or_else(ClassSpec::golden);
        self.ueda.tau.get_or_insert(tau);
        self.linearize.tau.get_or_insert(tau);
        self.linearize.class.get_or_insert_with(|| class.clone());
        self.glue.tau.get_or_insert(tau);
        self.glue.class.get_or_insert_with(|| class.clone());
        self.ks.tau.get_or_insert(tau);
        self.ks.class.get_or_insert(class);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Parameters {
    Dioph(DiophParams),
    Ueda(UedaParams),
    Linearize(LinearizeParams),
    Glue(GlueParams),
    Ks(KsParams),
    Lattice(LatticeParams),
    FullReport(FullReportParams),
}

impl Parameters {
    pub fn default_for(command: Command) -> Self {
        match command {
            Command::Dioph => Parameters::Dioph(Default::default()),
            Command::Ueda => Parameters::Ueda(Default::default()),
            Command::Linearize => Parameters::Linearize(Default::default()),
            Command::Glue => Parameters::Glue(Default::default()),
            Command::Ks => Parameters::Ks(Default::default()),
            Command::Lattice => Parameters::Lattice(Default::default()),
            Command::FullReport => Parameters::FullReport(Default::default()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub command: Command,
    pub parameters: Parameters,
    pub seed: u64,
    pub output_path: Option<String>,
}

/// Envelope as written on disk.
#[derive(Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub command: Command,
    #[serde(default)]
    pub parameters: Option<serde_json::Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct SchemaViolation {
    pub path: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid config: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct SchemaError {
    pub violations: Vec<SchemaViolation>,
}

impl SchemaError {
    fn single(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError { violations: vec![SchemaViolation { path: path.into(), message: message.into() }] }
    }
}

fn typed<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "parameters".to_string() } else { format!("parameters.{}", path) };
        SchemaError::single(path, e.into_inner().to_string())
    })
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| SchemaError::single(e.path().to_string(), e.into_inner().to_string()))?;
    let value = raw.parameters.unwrap_or_else(|| serde_json::json!({}));
    let parameters = match raw.command {
        Command::Dioph => Parameters::Dioph(typed(value)?),
        Command::Ueda => Parameters::Ueda(typed(value)?),
        Command::Linearize => Parameters::Linearize(typed(value)?),
        Command::Glue => Parameters::Glue(typed(value)?),
        Command::Ks => Parameters::Ks(typed(value)?),
        Command::Lattice => Parameters::Lattice(typed(value)?),
        Command::FullReport => Parameters::FullReport(typed(value)?),
    };
    let mut config = ScenarioConfig { command: raw.command, parameters, seed: raw.seed, output_path: raw.output_path };
    config.resolve();
    validate(&config)?;
    Ok(config)
}

pub fn default_config(command: Command) -> ScenarioConfig {
    let mut config = ScenarioConfig { command, parameters: Parameters::default_for(command), seed: 0, output_path: None };
    config.resolve();
    config
}

impl ScenarioConfig {
    pub fn resolve(&mut self) {
        let tau = Some([0.0, 1.0]);
        match &mut self.parameters {
            Parameters::FullReport(p) => p.resolve(),
            Parameters::Ueda(p) => {
                p.tau = p.tau.or(tau);
            }
            Parameters::Linearize(p) => {
                p.tau = p.tau.or(tau);
                p.class.get_or_insert_with(ClassSpec::golden);
            }
            Parameters::Glue(p) => {
                p.tau = p.tau.or(tau);
                p.class.get_or_insert_with(ClassSpec::golden);
            }
            Parameters::Ks(p) => {
                p.tau = p.tau.or(tau);
                p.class.get_or_insert_with(ClassSpec::golden);
            }
            _ => {}
        }
    }
}

fn check_class(out: &mut Vec<SchemaViolation>, path: &str, c: &Option<ClassSpec>) {
    if let Some(c) = c {
        if let Err(e) = c.parse() {
            out.push(SchemaViolation { path: format!("{}.class", path), message: e.to_string() });
        }
    }
}

fn check_tau(out: &mut Vec<SchemaViolation>, path: &str, tau: &Option<TauSpec>) {
    if let Some(t) = tau {
        if let Err(e) = shape(*t) {
            out.push(SchemaViolation { path: format!("{}.tau", path), message: e.to_string() });
        }
    }
}

/// Checks that parse but cannot be expressed by the types: rational strings and Im τ > 0.
fn validate(config: &ScenarioConfig) -> Result<(), SchemaError> {
    let mut v = Vec::new();
    let mut section = |path: &str, p: &Parameters| match p {
        Parameters::Dioph(d) => {
            for (i, c) in d.cases.iter().enumerate() {
                check_class(&mut v, &format!("{}.cases[{}]", path, i), &Some(c.class.clone()));
            }
        }
        Parameters::Ueda(u) => {
            check_tau(&mut v, path, &u.tau);
            if k3glue_core::exact::parse_rational(&u.exact_s).is_err() {
                v.push(SchemaViolation { path: format!("{}.exact_s", path), message: format!("not a rational: {:?}", u.exact_s) });
            }
        }
        Parameters::Linearize(l) => {
            check_tau(&mut v, path, &l.tau);
            check_class(&mut v, path, &l.class);
            for (name, s) in [("majorant_q", &l.majorant_q), ("majorant_m", &l.majorant_m)] {
                if k3glue_core::exact::parse_rational(s).is_err() {
                    v.push(SchemaViolation { path: format!("{}.{}", path, name), message: format!("not a rational: {:?}", s) });
                }
            }
        }
        Parameters::Glue(g) => {
            check_tau(&mut v, path, &g.tau);
            check_class(&mut v, path, &g.class);
            for (i, t) in g.volume.taus.iter().enumerate() {
                check_tau(&mut v, &format!("{}.volume.taus[{}]", path, i), &Some(*t));
            }
        }
        Parameters::Ks(k) => {
            check_tau(&mut v, path, &k.tau);
            check_class(&mut v, path, &k.class);
        }
        Parameters::Lattice(_) | Parameters::FullReport(_) => {}
    };
    match &config.parameters {
        Parameters::FullReport(f) => {
            section("parameters.shared", &Parameters::Ks(KsParams { tau: f.shared.tau, class: f.shared.class.clone(), ..Default::default() }));
            section("parameters.dioph", &Parameters::Dioph(f.dioph.clone()));
            section("parameters.ueda", &Parameters::Ueda(f.ueda.clone()));
            section("parameters.linearize", &Parameters::Linearize(f.linearize.clone()));
            section("parameters.glue", &Parameters::Glue(f.glue.clone()));
            section("parameters.ks", &Parameters::Ks(f.ks.clone()));
        }
        p => section("parameters", p),
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(SchemaError { violations: v })
    }
}

/// JSON schemas shipped with the binary: the envelope plus one per parameter block.
pub fn schemas() -> Vec<(&'static str, serde_json::Value)> {
    let s = |v: schemars::Schema| v.to_value();
    vec![
        ("config", s(schemars::schema_for!(RawConfig))),
        ("dioph", s(schemars::schema_for!(DiophParams))),
        ("ueda", s(schemars::schema_for!(UedaParams))),
        ("linearize", s(schemars::schema_for!(LinearizeParams))),
        ("glue", s(schemars::schema_for!(GlueParams))),
        ("ks", s(schemars::schema_for!(KsParams))),
        ("lattice", s(schemars::schema_for!(LatticeParams))),
        ("full-report", s(schemars::schema_for!(FullReportParams))),
    ]
}
