//! Running scenarios and rendering their reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    cyclotron_frequency, default_time_step, verify_angular_ehrenfest_dynamic, verify_landau_ground_state,
    DynamicEhrenfestReport, LandauOptions, LandauReport, PropagationTrace,
};
use crate::error::Result;
use crate::grid::Grid;
use crate::scenario::{CheckName, CheckSettings, Scenario};
use crate::states::{gaussian_packet, PacketSpec};
use crate::tensor::{run_tensor_suite, IdentityReport};
use crate::verification::{
    convergence_studies, is_central, verify_angular_ehrenfest_static, verify_central_torque, verify_force_forms,
    verify_gauge_expectations, verify_kinetic_ll_commutation, verify_ll_commutation, verify_pipi_commutation,
    ConvergenceReport, ConvergenceScenario, GaugeReport, ResidualReport,
};
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Multiplies the approximate tolerances (not the exact-zero ones).
    pub tolerance_scale: f64,
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tolerance_scale: 1.0,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub seed: u64,
    pub field: BTreeMap<String, String>,
    pub grid: Grid,
    pub states: Vec<PacketSpec>,
    pub checks: Vec<CheckName>,
    pub settings: CheckSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CheckDetail {
    Tensors(Vec<IdentityReport>),
    Residual(Vec<ResidualReport>),
    Convergence(ConvergenceReport),
    Gauge(Vec<GaugeReport>),
    Dynamic(Vec<DynamicEhrenfestReport>),
    Landau(LandauReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub order: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
    pub detail: Option<CheckDetail>,
}

impl CheckResult {
    fn failed(name: impl Into<String>, tolerance: f64, err: impl ToString) -> Self {
        CheckResult {
            name: name.into(),
            residual: f64::MAX,
            tolerance,
            order: None,
            pass: false,
            error: Some(err.to_string()),
            detail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioEcho,
    pub checks: Vec<CheckResult>,
    /// Seconds; excluded from determinism guarantees.
    pub wall_time: f64,
    pub pass: bool,
}

impl RunReport {
    /// Same report with the wall time zeroed, for byte comparisons.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            wall_time: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// JSON: a single object, keys in declaration order, shortest round-trip
/// float formatting. CSV: one row per check.
pub fn emit_report(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize"),
        Format::Csv => {
            let mut out = String::from("name,residual,tolerance,order,pass\n");
            push_csv_rows(&mut out, report);
            out
        }
    }
}

/// CSV for several reports; check names are prefixed with the scenario.
pub fn emit_reports_csv(reports: &[RunReport]) -> String {
    let mut out = String::from("name,residual,tolerance,order,pass\n");
    for r in reports {
        push_csv_rows(&mut out, r);
    }
    out
}

fn push_csv_rows(out: &mut String, report: &RunReport) {
    for c in &report.checks {
        let order = c.order.map(|o| format!("{o}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{}/{},{:e},{:e},{},{}",
            report.scenario.name, c.name, c.residual, c.tolerance, order, c.pass
        );
    }
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> RunReport {
    run_with_traces(scenario, opts).0
}

/// Runs every requested check; also returns the propagation traces of the
/// dynamic check, keyed `<scenario>/state<n>`.
pub fn run_with_traces(scenario: &Scenario, opts: &RunOptions) -> (RunReport, Vec<(String, PropagationTrace)>) {
    let start = Instant::now();
    let seed = opts.seed.unwrap_or(scenario.seed);
    let mut settings = scenario.settings.clone();
    settings.tolerance *= opts.tolerance_scale;
    settings.shift_tolerance *= opts.tolerance_scale;
    settings.energy_tolerance *= opts.tolerance_scale;
    settings.dense_tolerance *= opts.tolerance_scale;
    let mut checks = Vec::new();
    let mut traces = Vec::new();
    if scenario.checks.is_empty() {
        checks.push(CheckResult::failed("scenario", 0.0, "no checks requested"));
    }
    for &check in &scenario.checks {
        match check {
            CheckName::Converge => checks.extend(run_convergence(scenario, &settings)),
            CheckName::EhrenfestDynamic => {
                let (res, tr) = run_dynamic(scenario, &settings);
                checks.push(res);
                traces.extend(tr.into_iter().map(|(n, t)| (format!("{}/{}", scenario.name, n), t)));
            }
            other => {
                checks.push(run_check(other, scenario, &settings, seed));
                if other == CheckName::EhrenfestStatic && is_central(&scenario.field) {
                    let t = settings.torque_tolerance;
                    checks.push(residual_check("central-torque", t, scenario, |p| {
                        verify_central_torque(&scenario.field, p, t)
                    }));
                }
            }
        }
    }
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    let report = RunReport {
        scenario: ScenarioEcho {
            name: scenario.name.clone(),
            seed,
            field: scenario.field_source.clone(),
            grid: scenario.grid,
            states: scenario.states.clone(),
            checks: scenario.checks.clone(),
            settings,
        },
        checks,
        wall_time: start.elapsed().as_secs_f64(),
        pass,
    };
    (report, traces)
}

fn packets(scenario: &Scenario) -> Result<Vec<WaveFunction>> {
    scenario
        .states
        .iter()
        .map(|s| gaussian_packet(&scenario.grid, s))
        .collect()
}

fn residual_check(
    name: &str,
    tolerance: f64,
    scenario: &Scenario,
    f: impl Fn(&WaveFunction) -> Result<ResidualReport>,
) -> CheckResult {
    let reports: Result<Vec<ResidualReport>> = packets(scenario).and_then(|ps| {
        ps.iter()
            .zip(&scenario.states)
            .map(|(p, s)| f(p).map(|r| r.with_state(*s)))
            .collect()
    });
    match reports {
        Err(e) => CheckResult::failed(name, tolerance, e),
        Ok(reports) => CheckResult {
            name: name.to_string(),
            residual: reports.iter().map(|r| r.residual).fold(0.0, f64::max),
            tolerance,
            order: None,
            pass: reports.iter().all(|r| r.pass),
            error: None,
            detail: Some(CheckDetail::Residual(reports)),
        },
    }
}

fn run_check(check: CheckName, scenario: &Scenario, s: &CheckSettings, seed: u64) -> CheckResult {
    let cfg = &scenario.field;
    let tol = s.tolerance;
    match check {
        CheckName::VerifyTensors => {
            let reports = run_tensor_suite(seed, s.tensor_samples);
            let failures = reports.iter().map(|r| r.failures.len()).sum::<usize>();
            CheckResult {
                name: check.name().into(),
                residual: failures as f64,
                tolerance: 0.0,
                order: None,
                pass: failures == 0,
                error: None,
                detail: Some(CheckDetail::Tensors(reports)),
            }
        }
        CheckName::CanonicalL => residual_check(check.name(), tol, scenario, |p| verify_ll_commutation(cfg, p, tol)),
        CheckName::KineticL => residual_check(check.name(), tol, scenario, |p| {
            verify_kinetic_ll_commutation(cfg, p, tol)
        }),
        CheckName::PiPi => residual_check(check.name(), tol, scenario, |p| verify_pipi_commutation(cfg, p, tol)),
        CheckName::ForceForms => residual_check(check.name(), tol, scenario, |p| verify_force_forms(cfg, p, tol)),
        CheckName::EhrenfestStatic => residual_check(check.name(), tol, scenario, |p| {
            verify_angular_ehrenfest_static(cfg, p, tol)
        }),
        CheckName::Gauge => {
            let Some(chi) = scenario.chi.as_ref() else {
                return CheckResult::failed(check.name(), tol, "gauge check needs a gauge function");
            };
            let reports: Result<Vec<GaugeReport>> = packets(scenario).and_then(|ps| {
                ps.iter()
                    .map(|p| verify_gauge_expectations(cfg, chi, p, tol, s.shift_tolerance))
                    .collect()
            });
            match reports {
                Err(e) => CheckResult::failed(check.name(), tol, e),
                Ok(r) => CheckResult {
                    name: check.name().into(),
                    residual: r.iter().map(|g| g.kinetic.residual).fold(0.0, f64::max),
                    tolerance: tol,
                    order: None,
                    pass: r.iter().all(|g| g.pass),
                    error: None,
                    detail: Some(CheckDetail::Gauge(r)),
                },
            }
        }
        CheckName::Landau => {
            let opts = LandauOptions {
                energy_tolerance: s.energy_tolerance,
                eigen_tolerance: s.eigen_tolerance,
                dense_points: s.dense_points,
                dense_tolerance: s.dense_tolerance,
                seed,
            };
            match verify_landau_ground_state(cfg, &scenario.grid, &opts) {
                Err(e) => CheckResult::failed(check.name(), s.energy_tolerance, e),
                Ok(r) => CheckResult {
                    name: check.name().into(),
                    residual: r.relative_error,
                    tolerance: s.energy_tolerance,
                    order: None,
                    pass: r.pass,
                    error: None,
                    detail: Some(CheckDetail::Landau(r)),
                },
            }
        }
        CheckName::Converge | CheckName::EhrenfestDynamic => unreachable!("dispatched separately"),
    }
}

fn run_convergence(scenario: &Scenario, s: &CheckSettings) -> Vec<CheckResult> {
    let g = &scenario.grid;
    let sc = ConvergenceScenario {
        kind: s.converge[0],
        field: scenario.field.clone(),
        ndim: g.ndim(),
        extent: s.converge_extent.unwrap_or(g.shape()[0] as f64 * g.spacing()),
        states: scenario.states.clone(),
        chi: scenario.chi.clone(),
    };
    match convergence_studies(&sc, &s.converge, &s.converge_points) {
        Err(e) => s
            .converge
            .iter()
            .map(|k| CheckResult::failed(format!("converge:{}", k.name()), 0.0, &e))
            .collect(),
        Ok(reports) => reports
            .into_iter()
            .map(|r| CheckResult {
                name: format!("converge:{}", r.kind.name()),
                residual: *r.residuals.last().expect("at least three levels"),
                tolerance: 0.0,
                order: r.fitted_order,
                pass: r.pass,
                error: None,
                detail: Some(CheckDetail::Convergence(r)),
            })
            .collect(),
    }
}

fn run_dynamic(scenario: &Scenario, s: &CheckSettings) -> (CheckResult, Vec<(String, PropagationTrace)>) {
    let name = CheckName::EhrenfestDynamic.name();
    let cfg = &scenario.field;
    let omega = cyclotron_frequency(cfg).unwrap_or(0.0);
    let dt = s.dt.unwrap_or_else(|| default_time_step(&scenario.grid, cfg, omega));
    let steps = s.steps.unwrap_or_else(|| {
        if omega > 0.0 {
            (std::f64::consts::TAU / omega / dt).ceil() as usize
        } else {
            100
        }
    });
    let extra: Vec<&str> = s.trace.iter().map(String::as_str).collect();
    let psis = match packets(scenario) {
        Ok(p) => p,
        Err(e) => return (CheckResult::failed(name, s.tolerance, e), Vec::new()),
    };
    let mut reports = Vec::new();
    let mut traces = Vec::new();
    for (n, psi) in psis.iter().enumerate() {
        match verify_angular_ehrenfest_dynamic(cfg, &scenario.grid, psi, dt, steps, s.tolerance, &extra) {
            Ok(mut r) => {
                if let Some(t) = r.trace.take() {
                    traces.push((format!("state{}", n + 1), t));
                }
                r.report = r.report.with_state(scenario.states[n]);
                reports.push(r);
            }
            Err(e) => return (CheckResult::failed(name, s.tolerance, e), traces),
        }
    }
    let res = CheckResult {
        name: name.into(),
        residual: reports.iter().map(|r| r.report.residual).fold(0.0, f64::max),
        tolerance: s.tolerance,
        order: None,
        pass: reports.iter().all(|r| r.pass),
        error: None,
        detail: Some(CheckDetail::Dynamic(reports)),
    };
    (res, traces)
}
