//! Discretized quantum operators for a charged particle in a static
//! electromagnetic field, together with residual checks for the operator
//! identities obeyed by the kinetic (`r × π`) and canonical (`r × p`)
//! angular momenta.
//!
//! The crate is organised bottom-up:
//!
//! * [`tensor`]: exact Levi-Civita / Kronecker contraction identities.
//! * [`fields`]: polynomial vector and scalar potentials with exact derivatives.
//! * [`grid`], [`sparse`], [`wavefunction`], [`operators`], [`states`]:
//!   the finite-difference substrate.
//! * [`verification`]: identity residuals and convergence-order fits.
//! * [`dynamics`]: Crank–Nicolson propagation and ground states.
//! * [`scenario`], [`report`]: the scenario file format and run reports
//!   consumed by the `kinam` binary.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fields;
pub mod grid;
pub mod operators;
pub mod report;
pub mod scenario;
pub mod sparse;
pub mod states;
pub mod tensor;
pub mod verification;
pub mod wavefunction;

pub use error::{Error, Result};
pub use exact::{Index3, Rational, Vec3};
pub use fields::{FieldConfig, Gauge, PolyVec, Polynomial};
pub use grid::Grid;
pub use operators::LinearOperator;
pub use states::{gaussian_packet, PacketSpec};
pub use wavefunction::WaveFunction;

pub use num_complex::Complex64;
