//! Exact arithmetic: Gaussian rationals, polynomials, rational functions,
//! shift operators and special-function states.

pub mod diffop;
pub mod gcd;
pub mod poly;
pub mod ratfunc;
mod rational;
pub mod sampler;
pub mod scalar;
pub mod special;
pub mod vars;

pub use diffop::{DiffOp, Shift};
pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use sampler::{identity_test_random, SzOutcome, SzWitness};
pub use scalar::GaussRat;
pub use special::{ExpFactor, GammaFactor, HbarPower, SpecialState};
pub use vars::{Var, VarRole, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("DIV_ZERO: division by the zero rational function")]
    DivZero,
    #[error("VAR_MISMATCH: operands are built over different variable tables")]
    VarMismatch,
    #[error("BAD_STEP: {0}")]
    BadStep(String),
    #[error("DEGENERATE_SAMPLER: denominators vanished on {0} consecutive samples")]
    DegenerateSampler(usize),
    #[error("SIZE_LIMIT: {0}")]
    SizeLimit(String),
    #[error("INDEX: {0}")]
    Index(String),
    #[error("NOT_TORUS: {0}")]
    NotTorus(String),
    #[error("BAD_MATRIX: {0}")]
    BadMatrix(String),
    #[error("MISMATCH: {0}")]
    Mismatch(String),
}
