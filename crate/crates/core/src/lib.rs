//! Non-Hermitian, PT-symmetric Jaynes–Cummings model.
//!
//! Truncated Fock-space operators, the exact spectrum, static and
//! time-dependent Dyson maps to Hermitian counterparts, the concurrence of two
//! atoms in independent cavities, and brute-force oracles for all of them.
//!
//! Every numerical routine is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod dyson_dynamic;
pub mod dyson_static;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod model;
pub mod operator;
pub mod oracle;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{HilbertSpec, DEFAULT_CUTOFF, SPIN_DOWN, SPIN_UP};
pub use model::{Branch, Regime};
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type Operator = operator::ComplexOperator<f64>;
pub type Params = model::ModelParams<f64>;
pub type StaticMap = dyson_static::StaticDysonMap<f64>;
pub type DynamicMap = dyson_dynamic::DynamicDysonMap<f64>;
pub type TwoSystem = entanglement::TwoSystemConfig<f64>;
