//! Analytic electromagnetic fields.
//!
//! Potentials are polynomials with rational coefficients, so `Hmag = ∇×A`,
//! `E = −∇V` and gauge transformations are exact symbolic operations.

mod config;
mod expr;
mod poly;

pub use config::{
    gauge_transform, make_coulomb_quadratic, make_uniform_b, make_zero_field, FieldConfig, Gauge, PolyVec,
};
pub use expr::{parse_constant_at, parse_scalar, parse_scalar_at, parse_vector, parse_vector_at, Constants, ExprError};
pub use poly::{CompiledPolynomial, Polynomial};
