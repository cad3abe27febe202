//! Gaussian test states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::wavefunction::WaveFunction;

/// Minimum distance from the packet center to every ghost plane, in units of σ.
pub const MARGIN_SIGMAS: f64 = 4.0;
/// Minimum width, in grid spacings.
pub const MIN_SIGMA_SPACINGS: f64 = 3.0;

/// `N·exp(−|r−c|²/4σ²)·exp(ik·r)`, optionally times a vortex factor of
/// winding `m` about the packet axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub center: [f64; 3],
    pub sigma: f64,
    pub k: [f64; 3],
    pub vortex: i32,
}

impl PacketSpec {
    pub fn centered(sigma: f64) -> Self {
        PacketSpec {
            center: [0.0; 3],
            sigma,
            k: [0.0; 3],
            vortex: 0,
        }
    }

    pub fn at(mut self, center: [f64; 3]) -> Self {
        self.center = center;
        self
    }

    pub fn moving(mut self, k: [f64; 3]) -> Self {
        self.k = k;
        self
    }

    pub fn with_vortex(mut self, m: i32) -> Self {
        self.vortex = m;
        self
    }

    /// Checks the width and boundary margins against `grid`.
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let h = grid.spacing();
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::StatePrecondition(format!(
                "width must be positive, got {}",
                self.sigma
            )));
        }
        if self.sigma < MIN_SIGMA_SPACINGS * h * (1.0 - 1e-12) {
            return Err(Error::StatePrecondition(format!(
                "width {} is below {MIN_SIGMA_SPACINGS}h = {}",
                self.sigma,
                MIN_SIGMA_SPACINGS * h
            )));
        }
        if self.center.iter().chain(&self.k).any(|v| !v.is_finite()) {
            return Err(Error::StatePrecondition("center and wavevector must be finite".into()));
        }
        const AXES: [&str; 3] = ["x", "y", "z"];
        for a in 0..3 {
            if !grid.is_active(a) {
                if self.center[a] != 0.0 || self.k[a] != 0.0 {
                    return Err(Error::StatePrecondition(format!(
                        "{} component of center and wavevector must be 0 on a {}D grid",
                        AXES[a],
                        grid.ndim()
                    )));
                }
                continue;
            }
            let (lo, hi) = grid.ghost_planes(a);
            let need = MARGIN_SIGMAS * self.sigma;
            let d_lo = self.center[a] - lo;
            let d_hi = hi - self.center[a];
            if d_lo < need * (1.0 - 1e-12) {
                return Err(Error::StatePrecondition(format!(
                    "lower {} margin {:.6} is below {MARGIN_SIGMAS}σ = {:.6}",
                    AXES[a], d_lo, need
                )));
            }
            if d_hi < need * (1.0 - 1e-12) {
                return Err(Error::StatePrecondition(format!(
                    "upper {} margin {:.6} is below {MARGIN_SIGMAS}σ = {:.6}",
                    AXES[a], d_hi, need
                )));
            }
        }
        if self.vortex != 0 && grid.ndim() < 2 {
            return Err(Error::StatePrecondition("a vortex needs at least two axes".into()));
        }
        Ok(())
    }

    /// Unnormalized amplitude at `r`.
    pub fn amplitude(&self, r: [f64; 3]) -> Complex64 {
        let d = [0, 1, 2].map(|a| r[a] - self.center[a]);
        let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let phase = self.k[0] * r[0] + self.k[1] * r[1] + self.k[2] * r[2];
        let mut v = Complex64::from_polar((-r2 / (4.0 * self.sigma * self.sigma)).exp(), phase);
        if self.vortex != 0 {
            // smooth on the axis, unlike a bare e^{imφ}
            let s = self.vortex.signum() as f64;
            let w = Complex64::new(d[0], s * d[1]) / self.sigma;
            v *= w.powi(self.vortex.abs());
        }
        v
    }
}

/// Normalized Gaussian packet; rejects specs that violate the margins.
pub fn gaussian_packet(grid: &Grid, spec: &PacketSpec) -> Result<WaveFunction> {
    spec.validate(grid)?;
    Ok(WaveFunction::from_fn(*grid, |r| spec.amplitude(r))?.normalized())
}
