use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Complex amplitudes on the points of a [`Grid`], with the discrete L²
/// inner product `⟨φ|ψ⟩ = h^d Σ conj(φ) ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amps: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: amps.len(),
            });
        }
        if let Some(i) = amps.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(WaveFunction { grid, amps })
    }

    pub(crate) fn from_raw(grid: Grid, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), grid.len());
        WaveFunction { grid, amps }
    }

    pub fn zeros(grid: Grid) -> Self {
        WaveFunction {
            grid,
            amps: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Complex64) -> Result<Self> {
        let amps = (0..grid.len()).map(|p| f(grid.coordinate(p))).collect();
        WaveFunction::new(grid, amps)
    }

    /// Normalized state with independent standard-normal real and imaginary
    /// parts, for randomized operator checks.
    pub fn random(grid: Grid, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..grid.len())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        WaveFunction { grid, amps }.normalized()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    fn check(&self, other: &WaveFunction) -> Result<()> {
        if self.grid.compatible(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        self.check(other)?;
        Ok(raw_inner(&self.amps, &other.amps) * self.grid.cell_volume())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            let s = 1.0 / n;
            self.amps.iter_mut().for_each(|a| *a *= s);
        }
        self
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        WaveFunction {
            grid: self.grid,
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: Complex64, other: &WaveFunction) -> Result<Self> {
        self.check(other)?;
        Ok(WaveFunction {
            grid: self.grid,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + s * b).collect(),
        })
    }

    pub fn sub(&self, other: &WaveFunction) -> Result<Self> {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }

    pub fn add(&self, other: &WaveFunction) -> Result<Self> {
        self.add_scaled(Complex64::new(1.0, 0.0), other)
    }

    /// Pointwise multiplication by `f(r)`.
    pub fn multiply_pointwise(&self, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        WaveFunction {
            grid: self.grid,
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(p, a)| a * f(self.grid.coordinate(p)))
                .collect(),
        }
    }
}

pub(crate) fn raw_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

pub(crate) fn raw_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
