use thiserror::Error;

use crate::model::Regime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("photon mode index {index} out of range ({count} modes in space)")]
    InvalidMode { index: usize, count: usize },

    #[error("atom index {index} out of range ({count} spins in space)")]
    InvalidAtom { index: usize, count: usize },

    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("number function is not finite at n = {n}")]
    NonFiniteFunction { n: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("frequency mode {mode} is {regime:?}; the requested quantity needs an unbroken mode")]
    Regime { mode: usize, regime: Regime },

    #[error("static Dyson map is undefined at zero detuning (omega == nu)")]
    ZeroDetuning,

    #[error("Dyson coefficient for slot {slot} is singular or non-finite at t = {t}")]
    Singular { slot: usize, t: f64 },

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("integration aborted after t = {last_t}: {reason}")]
    Integration { last_t: f64, reason: String },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
}
