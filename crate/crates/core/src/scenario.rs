//! Scenario files: a line-oriented `key = value` format.
//!
//! ```text
//! name = demo
//! seed = 7
//!
//! [field]
//! let B = 1
//! A = (-B*y/2, B*x/2, 0)
//!
//! [grid]
//! dims = 48, 48, 48
//! h = 0.4
//!
//! [state]
//! sigma = 2.4
//! k = 0.2, 0, 0
//!
//! [checks]
//! run = LL, converge
//! converge = LL
//! converge_points = 32, 64, 128
//! converge_extent = 25.6
//! ```
//!
//! `#` starts a comment. `[state]` may repeat; every other section and key
//! appears at most once.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{Rational, Vec3};
use crate::fields::{
    make_uniform_b, parse_constant_at, parse_scalar_at, parse_vector_at, Constants, ExprError, FieldConfig, Gauge,
    PolyVec, Polynomial,
};
use crate::grid::Grid;
use crate::states::PacketSpec;
use crate::verification::{ConvergenceKind, DEFAULT_TOLERANCE, EXACT_TOLERANCE, SHIFT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown key '{key}' in {section}")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: unknown section '{section}'")]
    UnknownSection { line: usize, section: String },
    #[error("duplicate key '{key}' on lines {first} and {second}")]
    DuplicateKey { key: String, first: usize, second: usize },
    #[error("line {line}: unknown check '{name}'")]
    UnknownCheck { line: usize, name: String },
    #[error("no checks requested")]
    NoChecks,
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("missing required key '{0}'")]
    Missing(String),
}

impl ScenarioError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::Syntax { .. } => "syntax",
            ScenarioError::UnknownKey { .. } => "unknown-key",
            ScenarioError::UnknownSection { .. } => "unknown-section",
            ScenarioError::DuplicateKey { .. } => "duplicate-key",
            ScenarioError::UnknownCheck { .. } => "unknown-check",
            ScenarioError::NoChecks => "no-checks",
            ScenarioError::Invalid { .. } => "invalid",
            ScenarioError::Missing(_) => "missing-key",
        }
    }
}

impl From<ExprError> for ScenarioError {
    fn from(e: ExprError) -> Self {
        ScenarioError::Syntax {
            line: e.line,
            column: e.column,
            message: e.message,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckName {
    #[serde(rename = "verify-tensors")]
    VerifyTensors,
    #[serde(rename = "ll")]
    CanonicalL,
    #[serde(rename = "LL")]
    KineticL,
    #[serde(rename = "pipi")]
    PiPi,
    #[serde(rename = "force-forms")]
    ForceForms,
    #[serde(rename = "ehrenfest-static")]
    EhrenfestStatic,
    #[serde(rename = "ehrenfest-dynamic")]
    EhrenfestDynamic,
    #[serde(rename = "gauge")]
    Gauge,
    #[serde(rename = "converge")]
    Converge,
    #[serde(rename = "landau")]
    Landau,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::VerifyTensors,
        CheckName::CanonicalL,
        CheckName::KineticL,
        CheckName::PiPi,
        CheckName::ForceForms,
        CheckName::EhrenfestStatic,
        CheckName::EhrenfestDynamic,
        CheckName::Gauge,
        CheckName::Converge,
        CheckName::Landau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::VerifyTensors => "verify-tensors",
            CheckName::CanonicalL => "ll",
            CheckName::KineticL => "LL",
            CheckName::PiPi => "pipi",
            CheckName::ForceForms => "force-forms",
            CheckName::EhrenfestStatic => "ehrenfest-static",
            CheckName::EhrenfestDynamic => "ehrenfest-dynamic",
            CheckName::Gauge => "gauge",
            CheckName::Converge => "converge",
            CheckName::Landau => "landau",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        CheckName::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tunables of the individual checks. Everything has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSettings {
    pub tolerance: f64,
    pub exact_tolerance: f64,
    pub shift_tolerance: f64,
    pub converge: Vec<ConvergenceKind>,
    pub converge_points: Vec<usize>,
    /// Domain side for the refinement study; defaults to the grid's.
    pub converge_extent: Option<f64>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub trace: Vec<String>,
    pub energy_tolerance: f64,
    pub eigen_tolerance: f64,
    pub dense_points: Option<usize>,
    pub dense_tolerance: f64,
    pub tensor_samples: usize,
    pub torque_tolerance: f64,
}

impl Default for CheckSettings {
    fn default() -> Self {
        CheckSettings {
            tolerance: DEFAULT_TOLERANCE,
            exact_tolerance: EXACT_TOLERANCE,
            shift_tolerance: SHIFT_TOLERANCE,
            converge: Vec::new(),
            converge_points: Vec::new(),
            converge_extent: None,
            dt: None,
            steps: None,
            trace: Vec::new(),
            energy_tolerance: 0.02,
            eigen_tolerance: 1e-3,
            dense_points: None,
            dense_tolerance: 1e-4,
            tensor_samples: 100,
            torque_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub field: FieldConfig,
    /// Field keys as written, echoed in reports.
    pub field_source: BTreeMap<String, String>,
    pub chi: Option<Polynomial>,
    pub grid: Grid,
    pub states: Vec<PacketSpec>,
    pub checks: Vec<CheckName>,
    pub settings: CheckSettings,
}

struct Entry {
    line: usize,
    key: String,
    value: String,
    /// 0-based column where `value` starts.
    value_col: usize,
}

#[derive(Default)]
struct Section {
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn take(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

fn invalid(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        line,
        message: message.into(),
    }
}

fn check_keys(sec: &Section, name: &str, allowed: &[&str]) -> Result<(), ScenarioError> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &sec.entries {
        if !allowed.contains(&e.key.as_str()) && !(name == "[field]" && e.key.starts_with("let ")) {
            return Err(ScenarioError::UnknownKey {
                line: e.line,
                section: name.to_string(),
                key: e.key.clone(),
            });
        }
        if let Some(first) = seen.insert(&e.key, e.line) {
            return Err(ScenarioError::DuplicateKey {
                key: e.key.clone(),
                first,
                second: e.line,
            });
        }
    }
    Ok(())
}

fn parse_f64(e: &Entry) -> Result<f64, ScenarioError> {
    let v: f64 = e
        .value
        .parse()
        .map_err(|_| invalid(e.line, format!("'{}' expects a number, got '{}'", e.key, e.value)))?;
    if !v.is_finite() {
        return Err(invalid(e.line, format!("'{}' must be finite", e.key)));
    }
    Ok(v)
}

fn parse_positive(e: &Entry) -> Result<f64, ScenarioError> {
    let v = parse_f64(e)?;
    if v <= 0.0 {
        return Err(invalid(e.line, format!("'{}' must be positive, got {v}", e.key)));
    }
    Ok(v)
}

fn parse_usize(e: &Entry, s: &str) -> Result<usize, ScenarioError> {
    s.trim().parse().map_err(|_| {
        invalid(
            e.line,
            format!("'{}' expects a nonnegative integer, got '{}'", e.key, s.trim()),
        )
    })
}

fn split_list(e: &Entry) -> Vec<&str> {
    e.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_f64_list(e: &Entry) -> Result<Vec<f64>, ScenarioError> {
    split_list(e)
        .into_iter()
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| invalid(e.line, format!("'{}' expects numbers, got '{s}'", e.key)))
        })
        .collect()
}

fn parse_vec3(e: &Entry, ndim: usize) -> Result<[f64; 3], ScenarioError> {
    let v = parse_f64_list(e)?;
    if v.is_empty() || v.len() > 3 {
        return Err(invalid(e.line, format!("'{}' expects 1 to 3 components", e.key)));
    }
    if v.len() > ndim && v[ndim..].iter().any(|x| *x != 0.0) {
        return Err(invalid(
            e.line,
            format!("'{}' has a nonzero component beyond the grid's {ndim} axes", e.key),
        ));
    }
    let mut out = [0.0; 3];
    out[..v.len()].copy_from_slice(&v);
    Ok(out)
}

fn split_sections(text: &str) -> Result<(Section, Vec<(String, Section)>), ScenarioError> {
    let mut top = Section::default();
    let mut sections: Vec<(String, Section)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            if !trimmed.ends_with(']') {
                let col = body.len() - body.trim_start().len() + trimmed.len() + 1;
                return Err(ScenarioError::Syntax {
                    line,
                    column: col,
                    message: "expected ']'".into(),
                });
            }
            let name = trimmed.to_string();
            if !["[field]", "[grid]", "[state]", "[checks]"].contains(&name.as_str()) {
                return Err(ScenarioError::UnknownSection { line, section: name });
            }
            if name != "[state]" {
                if let Some((_, s)) = sections.iter().find(|(n, _)| *n == name) {
                    return Err(ScenarioError::DuplicateKey {
                        key: name,
                        first: s.line,
                        second: line,
                    });
                }
            }
            sections.push((
                name,
                Section {
                    line,
                    entries: Vec::new(),
                },
            ));
            continue;
        }
        let eq = body.find('=').ok_or_else(|| ScenarioError::Syntax {
            line,
            column: body.len() - body.trim_start().len() + 1,
            message: "expected 'key = value'".into(),
        })?;
        let key = body[..eq].trim();
        if key.is_empty() {
            return Err(ScenarioError::Syntax {
                line,
                column: eq + 1,
                message: "missing key before '='".into(),
            });
        }
        let rest = &body[eq + 1..];
        let value = rest.trim();
        let value_col = eq + 1 + (rest.len() - rest.trim_start().len());
        let entry = Entry {
            line,
            key: key.split_whitespace().collect::<Vec<_>>().join(" "),
            value: value.to_string(),
            value_col,
        };
        match sections.last_mut() {
            Some((_, s)) => s.entries.push(entry),
            None => top.entries.push(entry),
        }
    }
    Ok((top, sections))
}

const FIELD_KEYS: [&str; 9] = ["A", "V", "chi", "q", "hbar", "m", "c", "uniform_B", "gauge"];
const GRID_KEYS: [&str; 3] = ["dims", "h", "origin"];
const STATE_KEYS: [&str; 4] = ["center", "sigma", "k", "vortex"];
const CHECK_KEYS: [&str; 16] = [
    "run",
    "tolerance",
    "exact_tolerance",
    "shift_tolerance",
    "converge",
    "converge_points",
    "converge_extent",
    "dt",
    "steps",
    "trace",
    "energy_tolerance",
    "eigen_tolerance",
    "dense_points",
    "dense_tolerance",
    "tensor_samples",
    "torque_tolerance",
];

struct ParsedField {
    cfg: FieldConfig,
    chi: Option<Polynomial>,
    source: BTreeMap<String, String>,
}

fn parse_field(sec: Option<&Section>) -> Result<ParsedField, ScenarioError> {
    let empty = Section::default();
    let sec = sec.unwrap_or(&empty);
    check_keys(sec, "[field]", &FIELD_KEYS)?;
    let mut consts = Constants::new();
    let mut source = BTreeMap::new();
    for e in &sec.entries {
        source.insert(e.key.clone(), e.value.clone());
    }
    // `let` bindings are evaluated in file order; other keys may use any of them
    for e in sec.entries.iter().filter(|e| e.key.starts_with("let ")) {
        let name = e.key[4..].trim();
        if name.is_empty()
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            || name.starts_with(|c: char| c.is_ascii_digit())
        {
            return Err(invalid(e.line, format!("invalid constant name '{name}'")));
        }
        if ["x", "y", "z"].contains(&name) {
            return Err(invalid(
                e.line,
                format!("'{name}' is a coordinate and cannot be rebound"),
            ));
        }
        let v = parse_constant_at(&e.value, &consts, e.line, e.value_col)?;
        consts.insert(name.to_string(), v);
    }
    let constant = |key: &str, default: Rational| -> Result<Rational, ScenarioError> {
        match sec.take(key) {
            Some(e) => Ok(parse_constant_at(&e.value, &consts, e.line, e.value_col)?),
            None => Ok(default),
        }
    };
    let one = Rational::from_integer(1);
    let q = constant("q", one)?;
    let hbar = constant("hbar", one)?;
    let m = constant("m", one)?;
    let c = constant("c", one)?;
    let v = match sec.take("V") {
        Some(e) => parse_scalar_at(&e.value, &consts, e.line, e.value_col)?,
        None => Polynomial::zero(),
    };
    let a = match (sec.take("A"), sec.take("uniform_B")) {
        (Some(e), Some(u)) => {
            return Err(ScenarioError::DuplicateKey {
                key: "A/uniform_B".into(),
                first: e.line.min(u.line),
                second: e.line.max(u.line),
            })
        }
        (Some(e), None) => {
            if let Some(g) = sec.take("gauge") {
                return Err(invalid(g.line, "'gauge' only applies together with 'uniform_B'"));
            }
            parse_vector_at(&e.value, &consts, e.line, e.value_col)?
        }
        (None, Some(u)) => {
            let b = parse_vector_at(&u.value, &consts, u.line, u.value_col)?;
            let comps = [0, 1, 2].map(|k| b.component(k).as_constant());
            let [Some(bx), Some(by), Some(bz)] = comps else {
                return Err(invalid(u.line, "'uniform_B' must have constant components"));
            };
            let gauge = match sec.take("gauge") {
                None => Gauge::Symmetric,
                Some(g) => match g.value.as_str() {
                    "symmetric" => Gauge::Symmetric,
                    "landau" => Gauge::Landau,
                    other => {
                        return Err(invalid(
                            g.line,
                            format!("unknown gauge '{other}' (expected symmetric or landau)"),
                        ))
                    }
                },
            };
            make_uniform_b(&Vec3([bx, by, bz]), gauge)
                .map_err(|err| invalid(u.line, err.to_string()))?
                .vector_potential()
                .clone()
        }
        (None, None) => {
            if let Some(g) = sec.take("gauge") {
                return Err(invalid(g.line, "'gauge' only applies together with 'uniform_B'"));
            }
            PolyVec::zero()
        }
    };
    let cfg = FieldConfig::new(a, v).with_constants(q, hbar, m, c).map_err(|err| {
        let line = ["hbar", "m", "c"]
            .iter()
            .filter_map(|k| sec.take(k))
            .map(|e| e.line)
            .next()
            .unwrap_or(sec.line);
        invalid(line, err.to_string())
    })?;
    let chi = match sec.take("chi") {
        Some(e) => Some(parse_scalar_at(&e.value, &consts, e.line, e.value_col)?),
        None => None,
    };
    Ok(ParsedField { cfg, chi, source })
}

fn parse_grid(sec: &Section) -> Result<Grid, ScenarioError> {
    check_keys(sec, "[grid]", &GRID_KEYS)?;
    let dims_e = sec
        .take("dims")
        .ok_or_else(|| ScenarioError::Missing("[grid] dims".into()))?;
    let dims = split_list(dims_e)
        .into_iter()
        .map(|s| parse_usize(dims_e, s))
        .collect::<Result<Vec<_>, _>>()?;
    let h_e = sec.take("h").ok_or_else(|| ScenarioError::Missing("[grid] h".into()))?;
    let h = parse_positive(h_e)?;
    let grid = match sec.take("origin") {
        None => Grid::centered(&dims, h),
        Some(o) => {
            let v = parse_f64_list(o)?;
            if v.len() != dims.len() {
                return Err(invalid(
                    o.line,
                    format!("origin has {} components for {} axes", v.len(), dims.len()),
                ));
            }
            let mut origin = [0.0; 3];
            origin[..v.len()].copy_from_slice(&v);
            Grid::new(&dims, h, origin)
        }
    };
    grid.map_err(|err| invalid(dims_e.line, err.to_string()))
}

fn parse_state(sec: &Section, grid: &Grid) -> Result<PacketSpec, ScenarioError> {
    check_keys(sec, "[state]", &STATE_KEYS)?;
    let sigma_e = sec
        .take("sigma")
        .ok_or_else(|| invalid(sec.line, "[state] needs 'sigma'"))?;
    let mut spec = PacketSpec::centered(parse_positive(sigma_e)?);
    if let Some(e) = sec.take("center") {
        spec.center = parse_vec3(e, grid.ndim())?;
    }
    if let Some(e) = sec.take("k") {
        spec.k = parse_vec3(e, grid.ndim())?;
    }
    if let Some(e) = sec.take("vortex") {
        spec.vortex = e
            .value
            .parse()
            .map_err(|_| invalid(e.line, format!("'vortex' expects an integer, got '{}'", e.value)))?;
    }
    spec.validate(grid).map_err(|err| invalid(sec.line, err.to_string()))?;
    Ok(spec)
}

fn parse_checks(sec: Option<&Section>) -> Result<(Vec<CheckName>, CheckSettings), ScenarioError> {
    let sec = sec.ok_or(ScenarioError::NoChecks)?;
    check_keys(sec, "[checks]", &CHECK_KEYS)?;
    let run = sec.take("run").ok_or(ScenarioError::NoChecks)?;
    let mut checks = Vec::new();
    for name in split_list(run) {
        let c = CheckName::parse(name).ok_or_else(|| ScenarioError::UnknownCheck {
            line: run.line,
            name: name.to_string(),
        })?;
        if !checks.contains(&c) {
            checks.push(c);
        }
    }
    if checks.is_empty() {
        return Err(ScenarioError::NoChecks);
    }
    let mut s = CheckSettings::default();
    let pos = |key: &str, slot: &mut f64| -> Result<(), ScenarioError> {
        if let Some(e) = sec.take(key) {
            *slot = parse_positive(e)?;
        }
        Ok(())
    };
    pos("tolerance", &mut s.tolerance)?;
    pos("exact_tolerance", &mut s.exact_tolerance)?;
    pos("shift_tolerance", &mut s.shift_tolerance)?;
    pos("energy_tolerance", &mut s.energy_tolerance)?;
    pos("eigen_tolerance", &mut s.eigen_tolerance)?;
    pos("dense_tolerance", &mut s.dense_tolerance)?;
    pos("torque_tolerance", &mut s.torque_tolerance)?;
    if let Some(e) = sec.take("converge") {
        for name in split_list(e) {
            let k = ConvergenceKind::parse(name)
                .ok_or_else(|| invalid(e.line, format!("unknown convergence quantity '{name}'")))?;
            s.converge.push(k);
        }
    }
    if let Some(e) = sec.take("converge_points") {
        s.converge_points = split_list(e)
            .into_iter()
            .map(|v| parse_usize(e, v))
            .collect::<Result<_, _>>()?;
        if s.converge_points.len() < 3 || s.converge_points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid(
                e.line,
                "converge_points needs at least three strictly increasing resolutions",
            ));
        }
    }
    if let Some(e) = sec.take("converge_extent") {
        s.converge_extent = Some(parse_positive(e)?);
    }
    if let Some(e) = sec.take("dt") {
        s.dt = Some(parse_positive(e)?);
    }
    if let Some(e) = sec.take("steps") {
        let n = parse_usize(e, &e.value)?;
        if n < 2 {
            return Err(invalid(e.line, "'steps' must be at least 2"));
        }
        s.steps = Some(n);
    }
    if let Some(e) = sec.take("trace") {
        s.trace = split_list(e).into_iter().map(str::to_string).collect();
    }
    if let Some(e) = sec.take("dense_points") {
        s.dense_points = Some(parse_usize(e, &e.value)?);
    }
    if let Some(e) = sec.take("tensor_samples") {
        s.tensor_samples = parse_usize(e, &e.value)?;
    }
    if checks.contains(&CheckName::Converge) && (s.converge.is_empty() || s.converge_points.is_empty()) {
        return Err(invalid(
            run.line,
            "'converge' needs 'converge' and 'converge_points' settings",
        ));
    }
    Ok((checks, s))
}

/// Parses and validates a scenario. Grid and state margins are checked
/// here, before anything runs.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let (top, sections) = split_sections(text)?;
    check_keys(&top, "the header", &["name", "seed"])?;
    let name = top
        .take("name")
        .ok_or_else(|| ScenarioError::Missing("name".into()))?
        .value
        .clone();
    if name.is_empty() {
        return Err(ScenarioError::Missing("name".into()));
    }
    let seed = match top.take("seed") {
        Some(e) => e.value.parse().map_err(|_| {
            invalid(
                e.line,
                format!("'seed' expects a nonnegative integer, got '{}'", e.value),
            )
        })?,
        None => 0,
    };
    let find = |n: &str| sections.iter().find(|(s, _)| s == n).map(|(_, s)| s);
    let field = parse_field(find("[field]"))?;
    let (checks, settings) = parse_checks(find("[checks]"))?;
    let needs_grid = checks.iter().any(|c| *c != CheckName::VerifyTensors);
    let grid = match find("[grid]") {
        Some(s) => parse_grid(s)?,
        None if needs_grid => return Err(ScenarioError::Missing("[grid]".into())),
        None => Grid::centered(&[8], 1.0).expect("valid"),
    };
    let states = sections
        .iter()
        .filter(|(n, _)| n == "[state]")
        .map(|(_, s)| parse_state(s, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let needs_state = checks
        .iter()
        .any(|c| !matches!(c, CheckName::VerifyTensors | CheckName::Landau));
    if needs_state && states.is_empty() {
        return Err(ScenarioError::Missing("[state]".into()));
    }
    if checks.contains(&CheckName::Gauge) && field.chi.is_none() {
        return Err(ScenarioError::Missing("[field] chi".into()));
    }
    if settings
        .converge
        .iter()
        .any(|k| matches!(k, ConvergenceKind::GaugeKinetic | ConvergenceKind::GaugeCanonical))
        && field.chi.is_none()
    {
        return Err(ScenarioError::Missing("[field] chi".into()));
    }
    Ok(Scenario {
        name,
        seed,
        field: field.cfg,
        field_source: field.source,
        chi: field.chi,
        grid,
        states,
        checks,
        settings,
    })
}

macro_rules! builtin {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".scn")))),*]
    };
}

/// Scenario pack shipped with the binary, as `(name, source)`.
pub const BUILTIN: &[(&str, &str)] = builtin!(
    "paper-tensors",
    "paper-canonical-l-commutators",
    "paper-eq8-uniformB",
    "paper-eq10-pipi",
    "pipi-zero-field",
    "paper-force-forms",
    "force-forms-nonuniform",
    "paper-ehrenfest-static",
    "paper-ehrenfest-dynamic",
    "paper-gauge-claim",
    "landau-ground-state",
);

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// First comment line of a built-in scenario.
pub fn builtin_summary(name: &str) -> Option<&'static str> {
    builtin_source(name)?
        .lines()
        .find_map(|l| l.trim().strip_prefix('#').map(str::trim))
}

pub fn builtin(name: &str) -> Option<Scenario> {
    builtin_source(name).map(|s| parse_scenario(s).expect("built-in scenarios parse"))
}
