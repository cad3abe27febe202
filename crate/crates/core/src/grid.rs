use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of points along an active axis.
pub const MIN_AXIS_POINTS: usize = 8;

/// Uniform rectilinear grid in one to three dimensions.
///
/// Points are `origin + index · spacing` along each active axis. Inactive axes
/// (beyond `ndim`) have a single point at coordinate zero. Values outside the
/// grid are taken to be zero (Dirichlet).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    shape: [usize; 3],
    ndim: usize,
    spacing: f64,
    origin: [f64; 3],
}

impl Grid {
    pub fn new(dims: &[usize], spacing: f64, origin: [f64; 3]) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 {
            return Err(Error::InvalidGrid(format!("expected 1 to 3 axes, got {}", dims.len())));
        }
        if let Some(&n) = dims.iter().find(|&&n| n < MIN_AXIS_POINTS) {
            return Err(Error::InvalidGrid(format!(
                "every axis needs at least {MIN_AXIS_POINTS} points, got {n}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        let mut shape = [1; 3];
        let mut org = [0.0; 3];
        for (a, &n) in dims.iter().enumerate() {
            shape[a] = n;
            org[a] = origin[a];
        }
        Ok(Grid {
            shape,
            ndim: dims.len(),
            spacing,
            origin: org,
        })
    }

    /// Grid symmetric about the coordinate origin.
    pub fn centered(dims: &[usize], spacing: f64) -> Result<Self> {
        let mut origin = [0.0; 3];
        for (a, &n) in dims.iter().enumerate().take(3) {
            origin[a] = -0.5 * (n as f64 - 1.0) * spacing;
        }
        Grid::new(dims, spacing, origin)
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn dims(&self) -> &[usize] {
        &self.shape[..self.ndim]
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_active(&self, axis: usize) -> bool {
        axis < self.ndim
    }

    /// `h^d`, the quadrature weight of one point.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.ndim as i32)
    }

    /// Flat-index stride of `axis` (x fastest).
    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => 1,
            1 => self.shape[0],
            _ => self.shape[0] * self.shape[1],
        }
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.shape[0] * (idx[1] + self.shape[1] * idx[2])
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let ix = flat % self.shape[0];
        let rest = flat / self.shape[0];
        [ix, rest % self.shape[1], rest / self.shape[1]]
    }

    pub fn coordinate(&self, flat: usize) -> [f64; 3] {
        let m = self.multi_index(flat);
        [0, 1, 2].map(|a| self.origin[a] + m[a] as f64 * self.spacing)
    }

    /// Coordinates of every point, in flat order.
    pub fn coordinates(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|p| self.coordinate(p)).collect()
    }

    /// Positions of the two Dirichlet ghost planes bounding `axis`: one
    /// spacing beyond the first and last grid points.
    pub fn ghost_planes(&self, axis: usize) -> (f64, f64) {
        let lo = self.origin[axis] - self.spacing;
        let hi = self.origin[axis] + self.shape[axis] as f64 * self.spacing;
        (lo, hi)
    }

    /// Physical extent `n·h` along `axis` (distance between ghost planes minus `h`).
    pub fn extent(&self, axis: usize) -> f64 {
        self.shape[axis] as f64 * self.spacing
    }

    /// Same point layout check used before combining operators and states.
    pub fn compatible(&self, other: &Grid) -> bool {
        self.shape == other.shape
            && self.ndim == other.ndim
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
            && (0..3).all(|a| (self.origin[a] - other.origin[a]).abs() <= 1e-12 * self.spacing.max(1.0))
    }

    pub fn describe(&self) -> String {
        let dims: Vec<String> = self.dims().iter().map(|n| n.to_string()).collect();
        format!("{} h={}", dims.join("x"), self.spacing)
    }
}
