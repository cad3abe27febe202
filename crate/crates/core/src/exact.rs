//! Exact index and vector types shared by the tensor and field modules.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar used for field coefficients and contraction checks.
pub type Rational = Ratio<i128>;

/// A tensor index taking values 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Index3(u8);

impl Index3 {
    pub const X: Index3 = Index3(1);
    pub const Y: Index3 = Index3(2);
    pub const Z: Index3 = Index3(3);
    pub const ALL: [Index3; 3] = [Index3::X, Index3::Y, Index3::Z];

    pub fn new(value: i64) -> Result<Self> {
        match value {
            1..=3 => Ok(Index3(value as u8)),
            other => Err(Error::InvalidIndex(other)),
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based position, for array access.
    pub(crate) fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    pub(crate) fn from_slot(slot: usize) -> Self {
        debug_assert!(slot < 3);
        Index3(slot as u8 + 1)
    }
}

impl TryFrom<i64> for Index3 {
    type Error = Error;
    fn try_from(value: i64) -> Result<Self> {
        Index3::new(value)
    }
}

impl From<Index3> for i64 {
    fn from(value: Index3) -> i64 {
        value.0 as i64
    }
}

impl fmt::Display for Index3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact three-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vec3(pub [Rational; 3]);

impl Vec3 {
    pub fn zero() -> Self {
        Vec3([Rational::zero(); 3])
    }

    pub fn from_ints(v: [i64; 3]) -> Self {
        Vec3(v.map(|c| Rational::from_integer(c as i128)))
    }

    pub fn get(&self, i: Index3) -> Rational {
        self.0[i.slot()]
    }

    pub fn dot(&self, other: &Vec3) -> Rational {
        (0..3).map(|a| self.0[a] * other.0[a]).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.0.map(rational_to_f64)
    }
}

pub fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
