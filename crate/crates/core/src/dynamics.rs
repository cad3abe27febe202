//! Crank–Nicolson propagation, expectation tracking and ground states.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Index3;
use crate::fields::FieldConfig;
use crate::grid::Grid;
use crate::operators::{
    build_hamiltonian, build_kinetic_l, build_l, build_momentum, build_pi, build_position, build_torque, expectation,
    LinearOperator,
};
use crate::states::MARGIN_SIGMAS;
use crate::verification::{ComponentResidual, ResidualReport};
use crate::wavefunction::{raw_inner, raw_norm, WaveFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative residual required of every linear solve.
pub const SOLVE_TOLERANCE: f64 = 1e-12;
/// Largest grid accepted by the dense fallbacks.
pub const DENSE_LIMIT: usize = 1024;

/// Conjugate gradients for a Hermitian positive definite operator.
/// Returns the solution, the iteration count and the final relative residual.
pub fn conjugate_gradient(
    apply: impl Fn(&[Complex64], &mut [Complex64]),
    b: &[Complex64],
    x0: Option<&[Complex64]>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<Complex64>, usize, f64)> {
    let n = b.len();
    let bnorm = raw_norm(b);
    if bnorm == 0.0 {
        return Ok((vec![ZERO; n], 0, 0.0));
    }
    let mut x = x0.map(<[Complex64]>::to_vec).unwrap_or_else(|| vec![ZERO; n]);
    let mut ap = vec![ZERO; n];
    apply(&x, &mut ap);
    let mut r: Vec<Complex64> = b.iter().zip(&ap).map(|(b, a)| b - a).collect();
    let mut p = r.clone();
    let mut rr = raw_inner(&r, &r).re;
    let mut res = rr.sqrt() / bnorm;
    for it in 0..max_iter {
        if res <= tol {
            return Ok((x, it, res));
        }
        apply(&p, &mut ap);
        let alpha = rr / raw_inner(&p, &ap).re;
        for k in 0..n {
            x[k] += p[k] * alpha;
            r[k] -= ap[k] * alpha;
        }
        let rr_new = raw_inner(&r, &r).re;
        let beta = rr_new / rr;
        for k in 0..n {
            p[k] = r[k] + p[k] * beta;
        }
        rr = rr_new;
        res = rr.sqrt() / bnorm;
    }
    if res <= tol {
        Ok((x, max_iter, res))
    } else {
        Err(Error::SolverNotConverged {
            iterations: max_iter,
            residual: res,
        })
    }
}

/// Cayley-form propagator `(1 + iHdt/2ħ)ψ' = (1 − iHdt/2ħ)ψ`.
///
/// The system is solved by conjugate gradients on the normal equations
/// `(1 + α²H²)ψ' = (1 − iαH)²ψ`, α = dt/2ħ. Because every singular value
/// of `1 + iαH` is at least one, the normal-equation residual bounds the
/// residual of the original system.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    h: LinearOperator,
    alpha: f64,
    tol: f64,
    max_iter: usize,
}

impl CrankNicolson {
    /// `dt` may be negative to step backwards in time.
    pub fn new(h: LinearOperator, dt: f64, hbar: f64) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::Invalid(format!(
                "propagator needs a Hermitian operator, got '{}'",
                h.label()
            )));
        }
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::Invalid(format!(
                "time step must be finite and nonzero, got {dt}"
            )));
        }
        Ok(CrankNicolson {
            h,
            alpha: dt / (2.0 * hbar),
            tol: SOLVE_TOLERANCE,
            max_iter: 500,
        })
    }

    pub fn hamiltonian(&self) -> &LinearOperator {
        &self.h
    }

    pub fn step(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        if !self.h.grid().compatible(psi.grid()) {
            return Err(Error::GridMismatch);
        }
        let a = Complex64::new(0.0, -self.alpha);
        let x = psi.amplitudes();
        let hx = self.h.apply_slice(x);
        let b: Vec<Complex64> = x.iter().zip(&hx).map(|(x, hx)| x + a * hx).collect();
        let hb = self.h.apply_slice(&b);
        let rhs: Vec<Complex64> = b.iter().zip(&hb).map(|(b, hb)| b + a * hb).collect();
        let a2 = self.alpha * self.alpha;
        let apply = |v: &[Complex64], out: &mut [Complex64]| {
            let hv = self.h.apply_slice(v);
            self.h.apply_into(&hv, out);
            for k in 0..v.len() {
                out[k] = v[k] + out[k] * a2;
            }
        };
        let (out, _, _) = conjugate_gradient(apply, &rhs, Some(x), self.tol, self.max_iter)?;
        Ok(WaveFunction::from_raw(*psi.grid(), out))
    }
}

/// One Crank–Nicolson step of length `dt > 0` under `h` (with ħ = 1 units
/// taken from `hbar`).
pub fn crank_nicolson_step(h: &LinearOperator, psi: &WaveFunction, dt: f64, hbar: f64) -> Result<WaveFunction> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    CrankNicolson::new(h.clone(), dt, hbar)?.step(psi)
}

fn dense_matrix(op: &LinearOperator) -> Result<DMatrix<Complex64>> {
    let n = op.grid().len();
    if n > DENSE_LIMIT {
        return Err(Error::DenseTooLarge {
            limit: DENSE_LIMIT,
            got: n,
        });
    }
    Ok(DMatrix::from_row_slice(n, n, &op.matrix().to_dense()))
}

/// Crank–Nicolson step by dense LU, for cross-checking on small grids.
pub fn crank_nicolson_step_dense(h: &LinearOperator, psi: &WaveFunction, dt: f64, hbar: f64) -> Result<WaveFunction> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(Error::Invalid(format!(
            "time step must be finite and nonzero, got {dt}"
        )));
    }
    let hm = dense_matrix(h)?;
    let n = hm.nrows();
    let a = Complex64::new(0.0, dt / (2.0 * hbar));
    let lhs = DMatrix::<Complex64>::identity(n, n) + &hm * a;
    let rhs_m = DMatrix::<Complex64>::identity(n, n) - &hm * a;
    let v = DVector::from_column_slice(psi.amplitudes());
    let b = rhs_m * v;
    let x = lhs
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Invalid("singular Crank–Nicolson system".into()))?;
    Ok(WaveFunction::from_raw(*psi.grid(), x.as_slice().to_vec()))
}

/// Expectation values recorded along a propagation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationTrace {
    pub times: Vec<f64>,
    pub observables: BTreeMap<String, Vec<Complex64>>,
    /// `|‖ψ(t)‖ − ‖ψ(0)‖|`.
    pub norm_drift: Vec<f64>,
}

impl PropagationTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, label: &str) -> Option<&[Complex64]> {
        self.observables.get(label).map(Vec::as_slice)
    }

    /// Largest change of the norm across a single step.
    pub fn max_step_norm_drift(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.norm_drift.windows(2) {
            worst = worst.max((w[1] - w[0]).abs());
        }
        worst
    }

    /// Centered difference of a real series at interior samples, paired
    /// with the sample times.
    pub fn centered_derivative(&self, label: &str) -> Option<Vec<(f64, f64)>> {
        let s = self.series(label)?;
        Some(
            (1..self.times.len().saturating_sub(1))
                .map(|k| {
                    let dt = self.times[k + 1] - self.times[k - 1];
                    (self.times[k], (s[k + 1].re - s[k - 1].re) / dt)
                })
                .collect(),
        )
    }

    /// CSV with columns `time, <label>_re, <label>_im, ..., norm_drift`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for label in self.observables.keys() {
            let _ = write!(out, ",{label}_re,{label}_im");
        }
        out.push_str(",norm_drift\n");
        for k in 0..self.times.len() {
            let _ = write!(out, "{:e}", self.times[k]);
            for series in self.observables.values() {
                let _ = write!(out, ",{:e},{:e}", series[k].re, series[k].im);
            }
            let _ = writeln!(out, ",{:e}", self.norm_drift[k]);
        }
        out
    }
}

/// Operator for an observable label: `x1..x3` (also `x`, `y`, `z`),
/// `p1..p3`, `pi1..pi3`, `l1..l3`, `L1..L3`, `T1..T3` or `H`.
pub fn build_observable(label: &str, grid: &Grid, cfg: &FieldConfig) -> Result<LinearOperator> {
    let alias = match label {
        "x" => "x1",
        "y" => "x2",
        "z" => "x3",
        other => other,
    };
    if alias == "H" {
        return Ok(build_hamiltonian(grid, cfg));
    }
    let split = alias
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::Invalid(format!("unknown observable '{label}'")))?;
    let (name, idx) = alias.split_at(split);
    let axis = idx
        .parse::<i64>()
        .map_err(|_| Error::Invalid(format!("unknown observable '{label}'")))
        .and_then(Index3::new)?;
    let op = match name {
        "x" => build_position(grid, axis),
        "p" => build_momentum(grid, cfg, axis),
        "pi" => build_pi(grid, cfg, axis),
        "l" => build_l(grid, cfg, axis),
        "L" => build_kinetic_l(grid, cfg, axis),
        "T" => build_torque(grid, cfg, axis),
        _ => return Err(Error::Invalid(format!("unknown observable '{label}'"))),
    };
    Ok(op.with_label(label))
}

/// Mean and standard deviation of each coordinate under `|ψ|²`.
pub fn position_moments(psi: &WaveFunction) -> ([f64; 3], [f64; 3]) {
    let g = psi.grid();
    let mut w = 0.0;
    let mut m1 = [0.0; 3];
    let mut m2 = [0.0; 3];
    for (p, a) in psi.amplitudes().iter().enumerate() {
        let d = a.norm_sqr();
        let r = g.coordinate(p);
        w += d;
        for k in 0..3 {
            m1[k] += d * r[k];
            m2[k] += d * r[k] * r[k];
        }
    }
    let mean = m1.map(|v| v / w);
    let sd = [0, 1, 2].map(|k| (m2[k] / w - mean[k] * mean[k]).max(0.0).sqrt());
    (mean, sd)
}

/// Fails when the packet mean is closer than `MARGIN_SIGMAS` widths to a
/// ghost plane on an active axis.
pub fn check_margins(psi: &WaveFunction, step: usize) -> Result<()> {
    let g = psi.grid();
    let (mean, sd) = position_moments(psi);
    for a in 0..g.ndim() {
        let (lo, hi) = g.ghost_planes(a);
        let need = MARGIN_SIGMAS * sd[a];
        if mean[a] - lo < need || hi - mean[a] < need {
            return Err(Error::BoundaryViolation {
                step,
                detail: format!(
                    "axis {} mean {:.4} with width {:.4} is within {MARGIN_SIGMAS} widths of the boundary [{:.4}, {:.4}]",
                    a + 1,
                    mean[a],
                    sd[a],
                    lo,
                    hi
                ),
            });
        }
    }
    Ok(())
}

/// Propagates `psi0` for `steps` steps of length `dt`, recording the
/// expectation of each labelled observable at every step (including t = 0)
/// and checking the boundary margins.
pub fn propagate_and_track(
    cfg: &FieldConfig,
    grid: &Grid,
    psi0: &WaveFunction,
    dt: f64,
    steps: usize,
    observables: &[&str],
) -> Result<PropagationTrace> {
    if !grid.compatible(psi0.grid()) {
        return Err(Error::GridMismatch);
    }
    let h = build_hamiltonian(grid, cfg);
    let prop = CrankNicolson::new(h, dt, cfg.hbar_f64())?;
    let ops: Vec<LinearOperator> = observables
        .iter()
        .map(|l| build_observable(l, grid, cfg))
        .collect::<Result<_>>()?;
    let mut trace = PropagationTrace {
        times: Vec::with_capacity(steps + 1),
        observables: observables
            .iter()
            .map(|l| (l.to_string(), Vec::with_capacity(steps + 1)))
            .collect(),
        norm_drift: Vec::with_capacity(steps + 1),
    };
    let n0 = psi0.norm();
    let mut psi = psi0.clone();
    for step in 0..=steps {
        if step > 0 {
            psi = prop.step(&psi)?;
        }
        check_margins(&psi, step)?;
        trace.times.push(step as f64 * dt);
        trace.norm_drift.push((psi.norm() - n0).abs());
        for (label, op) in observables.iter().zip(&ops) {
            let v = expectation(op, &psi)?;
            trace.observables.get_mut(*label).expect("registered").push(v);
        }
    }
    Ok(trace)
}

/// Result of the time-dependent torque check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicEhrenfestReport {
    /// Per axis: `max_t |d⟨L_i⟩/dt − ⟨T_i⟩| / max_t |⟨T_i⟩|`.
    pub report: ResidualReport,
    pub max_step_norm_drift: f64,
    pub energy_drift: f64,
    pub steps: usize,
    pub dt: f64,
    pub pass: bool,
    #[serde(skip)]
    pub trace: Option<PropagationTrace>,
}

/// Per-step norm drift allowed during propagation.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-10;
/// Relative energy drift allowed over a run.
pub const ENERGY_DRIFT_TOLERANCE: f64 = 1e-8;

/// Compares the centered difference of `⟨L_i⟩(t)` with `⟨T_i⟩(t)` along a
/// Crank–Nicolson run.
pub fn verify_angular_ehrenfest_dynamic(
    cfg: &FieldConfig,
    grid: &Grid,
    psi0: &WaveFunction,
    dt: f64,
    steps: usize,
    tolerance: f64,
    extra_observables: &[&str],
) -> Result<DynamicEhrenfestReport> {
    if steps < 2 {
        return Err(Error::Invalid(
            "need at least two steps for a centered derivative".into(),
        ));
    }
    let mut labels = vec!["L1", "L2", "L3", "T1", "T2", "T3", "H"];
    for l in extra_observables {
        if !labels.contains(l) {
            labels.push(l);
        }
    }
    let trace = propagate_and_track(cfg, grid, psi0, dt, steps, &labels)?;
    let mut comps = Vec::new();
    for i in 1..=3 {
        let dl = trace.centered_derivative(&format!("L{i}")).expect("tracked");
        let t = trace.series(&format!("T{i}")).expect("tracked");
        let mut dev: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (k, (_, d)) in dl.iter().enumerate() {
            let tk = t[k + 1].re;
            dev = dev.max((d - tk).abs());
            scale = scale.max(tk.abs());
        }
        comps.push(if scale < crate::verification::ABSOLUTE_FLOOR {
            ComponentResidual::new_absolute(format!("dL{i}/dt-T{i}"), dev, tolerance)
        } else {
            ComponentResidual::new_relative(format!("dL{i}/dt-T{i}"), dev / scale, scale, tolerance)
        });
    }
    let e = trace.series("H").expect("tracked");
    let e0 = e[0].re;
    let energy_drift = e.iter().map(|v| (v.re - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE);
    let max_step_norm_drift = trace.max_step_norm_drift();
    let mut report = ResidualReport::from_components("ehrenfest-dynamic", *grid, tolerance, comps);
    report.components.push(ComponentResidual::new_absolute(
        "norm-drift-per-step",
        max_step_norm_drift,
        NORM_DRIFT_TOLERANCE,
    ));
    report.components.push(ComponentResidual::new_relative(
        "energy-drift",
        energy_drift,
        e0.abs(),
        ENERGY_DRIFT_TOLERANCE,
    ));
    let report = ResidualReport::from_components(report.identity, report.grid, tolerance, report.components);
    let pass = report.pass;
    Ok(DynamicEhrenfestReport {
        report,
        max_step_norm_drift,
        energy_drift,
        steps,
        dt,
        pass,
        trace: Some(trace),
    })
}

/// Default time step: `h²m/ħ`, capped so that `ω_c·dt ≤ 0.05` for
/// magnetic fields with cyclotron frequency `omega_c`.
pub fn default_time_step(grid: &Grid, cfg: &FieldConfig, omega_c: f64) -> f64 {
    let dt = grid.spacing().powi(2) * cfg.mass_f64() / cfg.hbar_f64();
    if omega_c > 0.0 {
        dt.min(0.05 / omega_c)
    } else {
        dt
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateOptions {
    /// Required relative eigen-residual `‖Hψ − Eψ‖ / |E|`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Lower bound on the spectrum; Gershgorin when absent.
    pub lower_bound: Option<f64>,
    pub initial: Option<WaveFunction>,
    /// Vectors iterated together; more than one resolves clustered
    /// low-lying eigenvalues.
    pub block: usize,
    pub seed: u64,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        GroundStateOptions {
            tol: 1e-8,
            max_iterations: 2000,
            lower_bound: None,
            initial: None,
            block: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: WaveFunction,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

/// Lowest eigenpair of a Hermitian operator.
///
/// Block inverse iteration with Rayleigh–Ritz. Each iteration applies
/// `(H − s_k)^{-1}` to every block vector with `s_k = b − 1/τ_k`, where `b`
/// is a lower bound on the spectrum and `τ` doubles every iteration: early
/// iterations are backward-Euler imaginary-time steps, later ones are
/// inverse iteration shifted to `b`. All solves are positive definite.
pub fn ground_state(h: &LinearOperator, opts: &GroundStateOptions) -> Result<GroundState> {
    if !h.is_hermitian() {
        return Err(Error::Invalid(format!(
            "ground state needs a Hermitian operator, got '{}'",
            h.label()
        )));
    }
    let grid = *h.grid();
    let n = grid.len();
    let lb = opts.lower_bound.unwrap_or_else(|| h.matrix().gershgorin_lower_bound());
    let ub = h.matrix().gershgorin_upper_bound();
    let spread = (ub - lb).max(f64::MIN_POSITIVE);
    let width = opts.block.clamp(1, n);
    let mut block: Vec<Vec<Complex64>> = Vec::with_capacity(width);
    if let Some(p) = &opts.initial {
        if !p.grid().compatible(&grid) {
            return Err(Error::GridMismatch);
        }
        block.push(p.amplitudes().to_vec());
    }
    let mut extra = 0;
    while block.len() < width {
        block.push(WaveFunction::random(grid, opts.seed.wrapping_add(extra)).into_amplitudes());
        extra += 1;
    }
    orthonormalize(&mut block, grid, opts.seed.wrapping_add(extra));
    let mut tau = 1.0 / spread;
    let mut history = Vec::new();
    let (mut energy, mut res) = rayleigh_ritz(h, &mut block)?;
    history.push(res);
    for it in 1..=opts.max_iterations {
        if res <= opts.tol {
            return Ok(GroundState {
                energy,
                state: WaveFunction::from_raw(grid, block.swap_remove(0)),
                iterations: it - 1,
                residual_history: history,
            });
        }
        let shift = lb - 1.0 / tau;
        let apply = |v: &[Complex64], out: &mut [Complex64]| {
            h.apply_into(v, out);
            for k in 0..v.len() {
                out[k] -= v[k] * shift;
            }
        };
        block = block
            .par_iter()
            .map(|v| conjugate_gradient(apply, v, Some(v), 1e-13, 20_000).map(|r| r.0))
            .collect::<Result<_>>()?;
        orthonormalize(&mut block, grid, opts.seed.wrapping_add(extra + it as u64));
        (energy, res) = rayleigh_ritz(h, &mut block)?;
        history.push(res);
        if tau < 1e15 {
            tau *= 2.0;
        }
    }
    Err(Error::EigenNotConverged {
        final_residual: res,
        history,
    })
}

/// Modified Gram–Schmidt, applied twice; collapsed vectors are replaced by
/// fresh random ones.
fn orthonormalize(block: &mut [Vec<Complex64>], grid: Grid, seed: u64) {
    for j in 0..block.len() {
        for attempt in 0..3u64 {
            for _ in 0..2 {
                for i in 0..j {
                    let (head, tail) = block.split_at_mut(j);
                    let c = raw_inner(&head[i], &tail[0]);
                    for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                        *x -= y * c;
                    }
                }
            }
            let nrm = raw_norm(&block[j]);
            if nrm > 1e-10 {
                block[j].iter_mut().for_each(|x| *x /= nrm);
                break;
            }
            block[j] =
                WaveFunction::random(grid, seed.wrapping_mul(31).wrapping_add(attempt + j as u64)).into_amplitudes();
        }
    }
}

/// Rotates an orthonormal block onto the Ritz vectors of `h`, lowest
/// first, and returns `(θ₀, ‖Hv₀ − θ₀v₀‖/|θ₀|)`.
fn rayleigh_ritz(h: &LinearOperator, block: &mut Vec<Vec<Complex64>>) -> Result<(f64, f64)> {
    let m = block.len();
    let hv: Vec<Vec<Complex64>> = block.par_iter().map(|v| h.apply_slice(v)).collect();
    let mut g = DMatrix::<Complex64>::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let e = raw_inner(&block[i], &hv[j]);
            g[(i, j)] = e;
            g[(j, i)] = e.conj();
        }
    }
    let eig = g.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    let src = std::mem::take(block);
    *block = order
        .iter()
        .map(|&k| {
            let mut out = vec![ZERO; src[0].len()];
            for (i, v) in src.iter().enumerate() {
                let c = eig.eigenvectors[(i, k)];
                for (o, x) in out.iter_mut().zip(v) {
                    *o += x * c;
                }
            }
            out
        })
        .collect();
    let theta = eig.eigenvalues[order[0]];
    if !theta.is_finite() {
        return Err(Error::NonFinite(0));
    }
    let hv0 = h.apply_slice(&block[0]);
    let r: Vec<Complex64> = hv0.iter().zip(&block[0]).map(|(a, b)| a - b * theta).collect();
    Ok((theta, raw_norm(&r) / theta.abs().max(f64::MIN_POSITIVE)))
}

/// Sorted eigenvalues of a Hermitian operator by dense diagonalization.
pub fn dense_eigenvalues(h: &LinearOperator) -> Result<Vec<f64>> {
    let m = dense_matrix(h)?;
    let eig = m.symmetric_eigen();
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Time-evolution helper returning the final state only.
pub fn evolve(h: &LinearOperator, psi: &WaveFunction, dt: f64, steps: usize, hbar: f64) -> Result<WaveFunction> {
    let prop = CrankNicolson::new(h.clone(), dt, hbar)?;
    let mut out = psi.clone();
    for _ in 0..steps {
        out = prop.step(&out)?;
    }
    Ok(out)
}

/// `e^{iθ}ψ` convenience used by the gauge-covariance checks.
pub fn phase_multiply(psi: &WaveFunction, theta: impl Fn([f64; 3]) -> f64) -> WaveFunction {
    psi.multiply_pointwise(|r| Complex64::from_polar(1.0, theta(r)))
}

/// `min_r qV(r)` over the grid. The kinetic part of the discrete
/// Hamiltonian is a sum of squares of Hermitian factors plus a nonnegative
/// diagonal, so this bounds the spectrum from below.
pub fn hamiltonian_lower_bound(grid: &Grid, cfg: &FieldConfig) -> f64 {
    let v = cfg.scalar_potential().compile();
    let q = cfg.charge_f64();
    (0..grid.len())
        .map(|p| q * v.eval(grid.coordinate(p)))
        .fold(f64::INFINITY, f64::min)
}

/// `|q||B|/mc` for a uniform nonzero magnetic field.
pub fn cyclotron_frequency(cfg: &FieldConfig) -> Option<f64> {
    if !cfg.has_uniform_hmag() {
        return None;
    }
    let b = cfg.hmag().eval_f64([0.0; 3]);
    let mag = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if mag == 0.0 || cfg.charge_f64() == 0.0 {
        return None;
    }
    Some(cfg.charge_f64().abs() * mag / (cfg.mass_f64() * crate::exact::rational_to_f64(cfg.light_speed())))
}

/// `√(ħc/|qB|)`.
pub fn magnetic_length(cfg: &FieldConfig) -> Option<f64> {
    cyclotron_frequency(cfg).map(|w| (cfg.hbar_f64() / (cfg.mass_f64() * w)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseCrossCheck {
    pub points: usize,
    pub spacing: f64,
    pub iterative: f64,
    pub dense: f64,
    pub relative_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauReport {
    pub energy: f64,
    /// `ħω_c/2`.
    pub expected: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub magnetic_length: f64,
    pub iterations: usize,
    pub eigen_residual: f64,
    pub dense: Option<DenseCrossCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct LandauOptions {
    /// Relative tolerance on `E_0` against `ħω_c/2`.
    pub energy_tolerance: f64,
    pub eigen_tolerance: f64,
    /// Points per axis of the dense cross-check grid, if any. The grid
    /// spans the same box as the main one.
    pub dense_points: Option<usize>,
    pub dense_tolerance: f64,
    pub seed: u64,
}

impl Default for LandauOptions {
    fn default() -> Self {
        LandauOptions {
            energy_tolerance: 0.02,
            eigen_tolerance: 1e-3,
            dense_points: Some(32),
            dense_tolerance: 1e-4,
            seed: 0,
        }
    }
}

fn ground_energy(grid: &Grid, cfg: &FieldConfig, tol: f64, seed: u64) -> Result<GroundState> {
    let h = build_hamiltonian(grid, cfg);
    let opts = GroundStateOptions {
        tol,
        max_iterations: 5000,
        lower_bound: Some(hamiltonian_lower_bound(grid, cfg)),
        initial: None,
        block: 4,
        seed,
    };
    ground_state(&h, &opts)
}

/// Lowest eigenvalue of the Hamiltonian for a uniform field against the
/// lowest Landau level `ħω_c/2`.
pub fn verify_landau_ground_state(cfg: &FieldConfig, grid: &Grid, opts: &LandauOptions) -> Result<LandauReport> {
    let omega = cyclotron_frequency(cfg)
        .ok_or_else(|| Error::Invalid("Landau check needs a uniform nonzero magnetic field".into()))?;
    let ell = magnetic_length(cfg).expect("field is uniform");
    let h = grid.spacing();
    let bx = (0..grid.ndim())
        .map(|a| grid.shape()[a] as f64 * h)
        .fold(f64::INFINITY, f64::min);
    if ell < 6.0 * h * (1.0 - 1e-12) {
        return Err(Error::StatePrecondition(format!(
            "magnetic length {ell:.4} is below 6h = {:.4}",
            6.0 * h
        )));
    }
    if ell > bx / 8.0 * (1.0 + 1e-12) {
        return Err(Error::StatePrecondition(format!(
            "magnetic length {ell:.4} exceeds box/8 = {:.4}",
            bx / 8.0
        )));
    }
    let gs = ground_energy(grid, cfg, opts.eigen_tolerance, opts.seed)?;
    let expected = 0.5 * cfg.hbar_f64() * omega;
    let relative_error = (gs.energy - expected).abs() / expected;
    let dense = match opts.dense_points {
        None => None,
        Some(n) => {
            let dh = bx / n as f64;
            let small = Grid::centered(&vec![n; grid.ndim()], dh)?;
            let hs = build_hamiltonian(&small, cfg);
            let d = dense_eigenvalues(&hs)?[0];
            let it = ground_energy(&small, cfg, opts.eigen_tolerance, opts.seed)?.energy;
            let gap = (it - d).abs() / d.abs().max(f64::MIN_POSITIVE);
            Some(DenseCrossCheck {
                points: n,
                spacing: dh,
                iterative: it,
                dense: d,
                relative_gap: gap,
                tolerance: opts.dense_tolerance,
                pass: gap <= opts.dense_tolerance,
            })
        }
    };
    let pass = relative_error <= opts.energy_tolerance && dense.as_ref().is_none_or(|d| d.pass);
    Ok(LandauReport {
        energy: gs.energy,
        expected,
        relative_error,
        tolerance: opts.energy_tolerance,
        magnetic_length: ell,
        iterations: gs.iterations,
        eigen_residual: *gs.residual_history.last().expect("at least one entry"),
        dense,
        pass,
    })
}
