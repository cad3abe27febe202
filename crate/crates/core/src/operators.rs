//! Finite-difference operators on a [`Grid`].
//!
//! Every operator is a CSR matrix over the grid points. Derivatives are
//! central differences with zero ghost values; the kinetic energy is the
//! composed product `π·π`, so it uses the wide (2h) stencil.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Index3;
use crate::fields::{FieldConfig, Polynomial};
use crate::grid::Grid;
use crate::sparse::CsrMatrix;
use crate::tensor::eps;
use crate::wavefunction::{raw_inner, raw_norm, WaveFunction};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Normalization slack accepted by [`expectation`].
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Number of random pairs used by [`LinearOperator::hermiticity_defect`].
pub const HERMITICITY_PAIRS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    label: String,
    hermitian: bool,
    grid: Grid,
    matrix: CsrMatrix,
}

impl LinearOperator {
    pub fn new(label: impl Into<String>, hermitian: bool, grid: Grid, matrix: CsrMatrix) -> Result<Self> {
        if matrix.nrows() != grid.len() || matrix.ncols() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: matrix.nrows(),
            });
        }
        Ok(LinearOperator {
            label: label.into(),
            hermitian,
            grid,
            matrix,
        })
    }

    fn raw(label: impl Into<String>, hermitian: bool, grid: Grid, matrix: CsrMatrix) -> Self {
        LinearOperator {
            label: label.into(),
            hermitian,
            grid,
            matrix,
        }
    }

    pub fn identity(grid: Grid) -> Self {
        LinearOperator::raw("1", true, grid, CsrMatrix::identity(grid.len()))
    }

    pub fn zero(grid: Grid) -> Self {
        LinearOperator::raw("0", true, grid, CsrMatrix::zeros(grid.len(), grid.len()))
    }

    /// Diagonal multiplication by a real function of position.
    pub fn real_diagonal(label: impl Into<String>, grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let d: Vec<f64> = (0..grid.len()).map(|p| f(grid.coordinate(p))).collect();
        LinearOperator::raw(label, true, grid, CsrMatrix::real_diagonal(&d))
    }

    pub fn polynomial_diagonal(label: impl Into<String>, grid: Grid, poly: &Polynomial, scale: f64) -> Self {
        let c = poly.compile();
        LinearOperator::real_diagonal(label, grid, |r| scale * c.eval(r))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn with_hermitian(mut self, hermitian: bool) -> Self {
        self.hermitian = hermitian;
        self
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.grid.compatible(grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        self.check_grid(psi.grid())?;
        Ok(WaveFunction::from_raw(self.grid, self.matrix.matvec(psi.amplitudes())?))
    }

    pub(crate) fn apply_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(x).expect("operator and vector sizes agree")
    }

    pub(crate) fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matrix.matvec_into(x, y).expect("operator and vector sizes agree")
    }

    /// `alpha·self + beta·other`. Hermitian when both are and the
    /// coefficients are real.
    pub fn combine(
        &self,
        alpha: Complex64,
        other: &LinearOperator,
        beta: Complex64,
        label: impl Into<String>,
    ) -> Result<Self> {
        self.check_grid(&other.grid)?;
        let hermitian = self.hermitian && other.hermitian && alpha.im == 0.0 && beta.im == 0.0;
        Ok(LinearOperator::raw(
            label,
            hermitian,
            self.grid,
            self.matrix.linear_combination(alpha, &other.matrix, beta)?,
        ))
    }

    pub fn plus(&self, other: &LinearOperator) -> Result<Self> {
        self.combine(ONE, other, ONE, format!("{} + {}", self.label, other.label))
    }

    pub fn minus(&self, other: &LinearOperator) -> Result<Self> {
        self.combine(ONE, other, -ONE, format!("{} - {}", self.label, other.label))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        LinearOperator::raw(
            format!("({s})·{}", self.label),
            self.hermitian && s.im == 0.0,
            self.grid,
            self.matrix.scale(s),
        )
    }

    /// Sparse product `self · other`. The result carries no Hermitian flag.
    pub fn compose(&self, other: &LinearOperator) -> Result<Self> {
        self.check_grid(&other.grid)?;
        Ok(LinearOperator::raw(
            format!("{}·{}", self.label, other.label),
            false,
            self.grid,
            self.matrix.matmul(&other.matrix)?,
        ))
    }

    pub fn adjoint(&self) -> Self {
        LinearOperator::raw(
            format!("{}†", self.label),
            self.hermitian,
            self.grid,
            self.matrix.adjoint(),
        )
    }

    /// Worst relative defect of `⟨φ|Oψ⟩ = conj(⟨ψ|Oφ⟩)` over seeded random
    /// pairs, measured against the Cauchy–Schwarz scale `‖φ‖‖Oψ‖`.
    pub fn hermiticity_defect(&self, seed: u64) -> f64 {
        (0..HERMITICITY_PAIRS as u64)
            .map(|k| {
                let phi = WaveFunction::random(self.grid, seed.wrapping_add(2 * k));
                let psi = WaveFunction::random(self.grid, seed.wrapping_add(2 * k + 1));
                let o_psi = self.apply_slice(psi.amplitudes());
                let o_phi = self.apply_slice(phi.amplitudes());
                let a = raw_inner(phi.amplitudes(), &o_psi);
                let b = raw_inner(psi.amplitudes(), &o_phi).conj();
                let scale =
                    (raw_norm(phi.amplitudes()) * raw_norm(&o_psi)).max(raw_norm(psi.amplitudes()) * raw_norm(&o_phi));
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b).norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn passes_hermiticity(&self, seed: u64, tol: f64) -> bool {
        self.hermiticity_defect(seed) <= tol
    }
}

/// Multiplication by the coordinate `x_axis`. On grids with fewer active
/// axes the inactive coordinates are identically zero.
pub fn build_position(grid: &Grid, axis: Index3) -> LinearOperator {
    let a = axis.slot();
    LinearOperator::real_diagonal(format!("x{}", axis), *grid, |r| r[a])
}

/// Central difference `(ψ₊ − ψ₋)/2h`, zero across the boundary and
/// identically zero along inactive axes.
pub fn build_derivative(grid: &Grid, axis: Index3) -> LinearOperator {
    let a = axis.slot();
    let label = format!("D{}", axis);
    if !grid.is_active(a) {
        return LinearOperator::zero(*grid).with_label(label).with_hermitian(false);
    }
    let n = grid.shape()[a];
    let stride = grid.stride(a);
    let c = Complex64::new(0.5 / grid.spacing(), 0.0);
    let m = CsrMatrix::from_row_fn(grid.len(), grid.len(), |p, row| {
        let idx = grid.multi_index(p)[a];
        if idx > 0 {
            row.push((p - stride, -c));
        }
        if idx + 1 < n {
            row.push((p + stride, c));
        }
    });
    LinearOperator::raw(label, false, *grid, m)
}

/// Canonical momentum `−iħD`.
pub fn build_momentum(grid: &Grid, cfg: &FieldConfig, axis: Index3) -> LinearOperator {
    let d = build_derivative(grid, axis);
    LinearOperator::raw(format!("p{}", axis), true, *grid, d.matrix.scale(-I * cfg.hbar_f64()))
}

/// Kinetic momentum `π_i = −iħD_i − (q/c)A_i`.
pub fn build_pi(grid: &Grid, cfg: &FieldConfig, axis: Index3) -> LinearOperator {
    let p = build_momentum(grid, cfg, axis);
    let a = LinearOperator::polynomial_diagonal(
        "A",
        *grid,
        cfg.vector_potential().component(axis.slot()),
        cfg.coupling_f64(),
    );
    LinearOperator::raw(
        format!("pi{}", axis),
        true,
        *grid,
        p.matrix.sub(&a.matrix).expect("same grid"),
    )
}

/// `Σ_jk ε_ijk x_j B_k` for per-axis operators `B_k`.
fn cross_with_position(grid: &Grid, i: Index3, factors: &[LinearOperator; 3]) -> CsrMatrix {
    let i = i.slot();
    let mut acc = CsrMatrix::zeros(grid.len(), grid.len());
    for j in 0..3 {
        for k in 0..3 {
            let s = eps(i, j, k);
            if s == 0 || !grid.is_active(k) {
                continue;
            }
            let xj: Vec<Complex64> = (0..grid.len())
                .map(|p| Complex64::new(grid.coordinate(p)[j], 0.0))
                .collect();
            let term = factors[k].matrix.scale_rows(&xj).expect("same grid");
            acc = acc
                .linear_combination(ONE, &term, Complex64::new(s as f64, 0.0))
                .expect("same grid");
        }
    }
    acc
}

/// Canonical angular momentum `l_i = ε_ijk x_j p_k`.
pub fn build_l(grid: &Grid, cfg: &FieldConfig, i: Index3) -> LinearOperator {
    let p = Index3::ALL.map(|k| build_momentum(grid, cfg, k));
    LinearOperator::raw(format!("l{}", i), true, *grid, cross_with_position(grid, i, &p))
}

/// The polynomial `(q/c)ε_ijk x_j A_k` separating `l_i` from `L_i`.
pub fn angular_gauge_term(cfg: &FieldConfig, i: Index3) -> Polynomial {
    let i = i.slot();
    let a = cfg.vector_potential();
    let mut acc = Polynomial::zero();
    for j in 0..3 {
        for k in 0..3 {
            match eps(i, j, k) {
                1 => acc = &acc + &(&Polynomial::coordinate(j) * a.component(k)),
                -1 => acc = &acc - &(&Polynomial::coordinate(j) * a.component(k)),
                _ => {}
            }
        }
    }
    acc.scale(cfg.coupling())
}

/// Kinetic angular momentum `L_i = l_i − (q/c)ε_ijk x_j A_k`.
pub fn build_kinetic_l(grid: &Grid, cfg: &FieldConfig, i: Index3) -> LinearOperator {
    let l = build_l(grid, cfg, i);
    let corr = LinearOperator::polynomial_diagonal("xA", *grid, &angular_gauge_term(cfg, i), 1.0);
    LinearOperator::raw(
        format!("L{}", i),
        true,
        *grid,
        l.matrix.sub(&corr.matrix).expect("same grid"),
    )
}

/// `L_i` assembled as `ε_ijk x_j π_k`.
pub fn build_kinetic_l_from_pi(grid: &Grid, cfg: &FieldConfig, i: Index3) -> LinearOperator {
    let pi = Index3::ALL.map(|k| build_pi(grid, cfg, k));
    LinearOperator::raw(format!("L{}", i), true, *grid, cross_with_position(grid, i, &pi))
}

/// `Σ_i π_i π_i` as an explicit sparse product, with no boundary term.
pub fn build_pi_squared(grid: &Grid, cfg: &FieldConfig) -> LinearOperator {
    let mut acc = CsrMatrix::zeros(grid.len(), grid.len());
    for axis in Index3::ALL {
        if !grid.is_active(axis.slot()) && cfg.vector_potential().component(axis.slot()).is_zero() {
            continue;
        }
        let pi = build_pi(grid, cfg, axis);
        acc = acc
            .add(&pi.matrix.matmul(&pi.matrix).expect("square"))
            .expect("same grid");
    }
    LinearOperator::raw("pi·pi", true, *grid, acc)
}

/// Diagonal `(ħ/2h)²` on the first and last layer of every active axis.
///
/// This is the contribution of the ghost rows of `π` (whose value just
/// outside the grid is `−iħψ_edge/2h`) to `π†π`.
pub fn boundary_closure(grid: &Grid, cfg: &FieldConfig) -> LinearOperator {
    let c = (cfg.hbar_f64() * 0.5 / grid.spacing()).powi(2);
    let shape = grid.shape();
    let d: Vec<f64> = (0..grid.len())
        .map(|p| {
            let idx = grid.multi_index(p);
            (0..grid.ndim())
                .map(|a| (idx[a] == 0) as u8 as f64 + (idx[a] + 1 == shape[a]) as u8 as f64)
                .sum::<f64>()
                * c
        })
        .collect();
    LinearOperator::raw("closure", true, *grid, CsrMatrix::real_diagonal(&d))
}

/// `H = (π·π + closure)/2m + qV`.
pub fn build_hamiltonian(grid: &Grid, cfg: &FieldConfig) -> LinearOperator {
    let kin = build_pi_squared(grid, cfg)
        .plus(&boundary_closure(grid, cfg))
        .expect("same grid");
    let v = LinearOperator::polynomial_diagonal("V", *grid, cfg.scalar_potential(), cfg.charge_f64());
    let m = Complex64::new(0.5 / cfg.mass_f64(), 0.0);
    kin.combine(m, &v, ONE, "H").expect("same grid")
}

/// Assembly route for the magnetic force operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceForm {
    /// `(i/2mħ)[Σπ_iπ_i, π_k]`.
    Definition,
    /// `(q/2mc)ε_kmn{π_m, H_n}`.
    Anticommutator,
    /// `(q/mc)ε_kmn H_n π_m − (iħq/2mc)ε_kmn ∂_m H_n`.
    Expanded,
}

impl ForceForm {
    pub const ALL: [ForceForm; 3] = [ForceForm::Definition, ForceForm::Anticommutator, ForceForm::Expanded];

    pub fn name(self) -> &'static str {
        match self {
            ForceForm::Definition => "definition",
            ForceForm::Anticommutator => "anticommutator",
            ForceForm::Expanded => "expanded",
        }
    }
}

/// Magnetic force `M_k` in the requested form.
///
/// The definition form is materialized as `P·π_k − π_k·P` with
/// `P = Σπ_iπ_i`; large grids should prefer [`apply_magnetic_force`].
pub fn build_magnetic_force(grid: &Grid, cfg: &FieldConfig, k: Index3, form: ForceForm) -> LinearOperator {
    let label = format!("M{}[{}]", k, form.name());
    let n = grid.len();
    let mass = cfg.mass_f64();
    let hbar = cfg.hbar_f64();
    let qc = cfg.coupling_f64();
    match form {
        ForceForm::Definition => {
            let p2 = build_pi_squared(grid, cfg);
            let pik = build_pi(grid, cfg, k);
            let comm = p2
                .matrix
                .matmul(&pik.matrix)
                .and_then(|a| a.sub(&pik.matrix.matmul(&p2.matrix)?))
                .expect("same grid");
            LinearOperator::raw(label, true, *grid, comm.scale(I / (2.0 * mass * hbar)))
        }
        ForceForm::Anticommutator | ForceForm::Expanded => {
            let k0 = k.slot();
            let h = cfg.hmag().compile();
            let mut acc = CsrMatrix::zeros(n, n);
            for m in 0..3 {
                for nn in 0..3 {
                    let s = eps(k0, m, nn);
                    if s == 0 || h[nn].is_zero() {
                        continue;
                    }
                    let hn: Vec<Complex64> = (0..n)
                        .map(|p| Complex64::new(h[nn].eval(grid.coordinate(p)), 0.0))
                        .collect();
                    let pim = build_pi(grid, cfg, Index3::from_slot(m));
                    let term = match form {
                        ForceForm::Anticommutator => pim
                            .matrix
                            .scale_rows(&hn)
                            .and_then(|a| a.add(&pim.matrix.scale_cols(&hn)?))
                            .expect("same grid")
                            .scale(Complex64::new(0.5, 0.0)),
                        _ => {
                            let dh = cfg.hmag().component(nn).derivative(m).compile();
                            let diag: Vec<Complex64> =
                                (0..n).map(|p| -I * 0.5 * hbar * dh.eval(grid.coordinate(p))).collect();
                            pim.matrix
                                .scale_rows(&hn)
                                .and_then(|a| a.add(&CsrMatrix::diagonal(&diag)))
                                .expect("same grid")
                        }
                    };
                    acc = acc
                        .linear_combination(ONE, &term, Complex64::new(s as f64, 0.0))
                        .expect("same grid");
                }
            }
            let hermitian = form == ForceForm::Anticommutator || cfg.has_uniform_hmag();
            LinearOperator::raw(label, hermitian, *grid, acc.scale(Complex64::new(qc / mass, 0.0)))
        }
    }
}

/// `M_k ψ` without materializing products deeper than a pair.
pub fn apply_magnetic_force(
    grid: &Grid,
    cfg: &FieldConfig,
    k: Index3,
    form: ForceForm,
    psi: &WaveFunction,
) -> Result<WaveFunction> {
    match form {
        ForceForm::Definition => {
            let p2 = build_pi_squared(grid, cfg);
            let pik = build_pi(grid, cfg, k);
            let c = commutator_apply(&p2, &pik, psi)?;
            Ok(c.scaled(I / (2.0 * cfg.mass_f64() * cfg.hbar_f64())))
        }
        _ => build_magnetic_force(grid, cfg, k, form).apply(psi),
    }
}

/// Force `f_k = M_k + qE_k` with the expanded magnetic form.
pub fn build_force(grid: &Grid, cfg: &FieldConfig, k: Index3) -> LinearOperator {
    let m = build_magnetic_force(grid, cfg, k, ForceForm::Expanded);
    let e = LinearOperator::polynomial_diagonal("qE", *grid, cfg.efield().component(k.slot()), cfg.charge_f64());
    let hermitian = m.hermitian;
    LinearOperator::raw(
        format!("f{}", k),
        hermitian,
        *grid,
        m.matrix.add(&e.matrix).expect("same grid"),
    )
}

/// Torque `T_i = ½ε_ijk(x_j f_k + f_k x_j)`.
pub fn build_torque(grid: &Grid, cfg: &FieldConfig, i: Index3) -> LinearOperator {
    let i0 = i.slot();
    let n = grid.len();
    let f = Index3::ALL.map(|k| build_force(grid, cfg, k));
    let mut acc = CsrMatrix::zeros(n, n);
    for j in 0..3 {
        for k in 0..3 {
            let s = eps(i0, j, k);
            if s == 0 {
                continue;
            }
            let xj: Vec<Complex64> = (0..n).map(|p| Complex64::new(grid.coordinate(p)[j], 0.0)).collect();
            let fk = &f[k].matrix;
            let sym = fk
                .scale_rows(&xj)
                .and_then(|a| a.add(&fk.scale_cols(&xj)?))
                .expect("same grid");
            acc = acc
                .linear_combination(ONE, &sym, Complex64::new(0.5 * s as f64, 0.0))
                .expect("same grid");
        }
    }
    let hermitian = f.iter().all(|o| o.hermitian);
    LinearOperator::raw(format!("T{}", i), hermitian, *grid, acc)
}

/// Diagonal `(q/c)(r·H) x_k`, the field correction in `[L_i, L_j]`.
pub fn build_angular_correction(grid: &Grid, cfg: &FieldConfig, k: Index3) -> LinearOperator {
    let h = cfg.hmag().compile();
    let qc = cfg.coupling_f64();
    let k0 = k.slot();
    LinearOperator::real_diagonal(format!("(r·H)x{}", k), *grid, |r| {
        qc * (r[0] * h[0].eval(r) + r[1] * h[1].eval(r) + r[2] * h[2].eval(r)) * r[k0]
    })
}

/// `(AB − BA)ψ` from four operator applications.
pub fn commutator_apply(a: &LinearOperator, b: &LinearOperator, psi: &WaveFunction) -> Result<WaveFunction> {
    a.check_grid(&b.grid)?;
    let ab = a.apply(&b.apply(psi)?)?;
    let ba = b.apply(&a.apply(psi)?)?;
    ab.sub(&ba)
}

/// `(AB + BA)ψ` from four operator applications.
pub fn anticommutator_apply(a: &LinearOperator, b: &LinearOperator, psi: &WaveFunction) -> Result<WaveFunction> {
    a.check_grid(&b.grid)?;
    let ab = a.apply(&b.apply(psi)?)?;
    let ba = b.apply(&a.apply(psi)?)?;
    ab.add(&ba)
}

/// `⟨ψ|O|ψ⟩` for a normalized state.
pub fn expectation(op: &LinearOperator, psi: &WaveFunction) -> Result<Complex64> {
    let n = psi.norm();
    if (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(n));
    }
    psi.inner(&op.apply(psi)?)
}
