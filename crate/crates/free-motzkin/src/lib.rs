//! Solver and verifier toolkit for the integrable free Motzkin spin chain.
//!
//! The chain is a periodic spin-1 model on the local basis `{u, f, d}` whose
//! two-site interaction is a Temperley-Lieb projector sum. The crate builds
//! the model from its 9x9 R-matrix upward:
//!
//! * [`local_algebra`] — the R-matrix, the Temperley-Lieb generator and the
//!   single-site operators, plus numerical checks of the Yang-Baxter
//!   equation, unitarity and the degenerate partial transpose.
//! * [`chain`] — inhomogeneous monodromy and transfer matrices, their
//!   polynomial coefficients in the spectral parameter, and the Hamiltonian
//!   by both the direct projector sum and the logarithmic trace identity.
//! * [`omega`] — the weighted-permutation operator sitting at the top of the
//!   transfer matrix, its cycle census, and the exact Mobius-function count
//!   of its root-of-unity eigenvalues.
//! * [`bethe`] — the omega-deformed T-Q relation and Bethe equations, solved
//!   by multistart Newton iteration in log form.
//! * [`xxx`] — the XXX spin-1/2 reference solver used to validate the T-Q
//!   machinery against a textbook case.
//! * [`verifier`] — brute-force diagonalization oracles and the
//!   sector-resolved completeness ledger matching Bethe output against the
//!   exact spectrum.
//!
//! Entry points for each capability are demonstrated under `examples/`; the
//! `free-motzkin` binary exposes the same suites as subcommands.

pub mod bethe;
pub mod chain;
pub mod cli;
pub mod linalg;
pub mod local_algebra;
pub mod omega;
pub mod operator;
pub mod tolerance;
pub mod verifier;
pub mod xxx;

pub use num_complex::Complex64 as C64;

pub use chain::ChainConfig;
pub use operator::{Operator, TensorSpace};
pub use tolerance::{Residual, Tolerances};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("system size {n} exceeds the dense cap {cap} (3^{n} states)")]
    SizeCap { n: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("linear algebra backend: {0}")]
    LinAlg(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::LinAlg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
