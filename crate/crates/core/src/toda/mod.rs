//! Floating-point layer for the open Toda chain: log-Gamma, the
//! Mellin-Barnes eigenfunction, the spectral and dual checks, the Lax and
//! monodromy operators, and the numerical pairing check.

pub mod lgamma;
pub mod mb;
pub mod operators;
pub mod pairing;
pub mod spectral;

pub use lgamma::lgamma_complex;
pub use mb::{mb_eigenfunction, EigenfunctionSpec, MbKernel, QuadratureConfig, Rule};
pub use operators::{build_toda_operators, TodaOp, TodaOperators};
pub use pairing::{pairing_check, PairingSample};
pub use spectral::{verify_dual_equation, verify_spectral, SpectralConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TodaError {
    #[error("POLE: {0}")]
    Pole(String),
    #[error("INSUFFICIENT_TRUNCATION: estimated tail {tail:.3e} exceeds {tolerance:.1e}")]
    InsufficientTruncation { tail: f64, tolerance: f64 },
    #[error("CONTOUR_OBSTRUCTION: {0}")]
    ContourObstruction(String),
    #[error("BAD_SPEC: {0}")]
    BadSpec(String),
}
