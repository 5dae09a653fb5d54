//! Maximum quantum Fisher information over the inputs of a quantum channel.
//!
//! The central routine, [`optimizer::optimize`], alternates between the
//! symmetric logarithmic derivative of the current channel output and the
//! top eigenvector of the channel adjoint applied to `-L^2 + 2i[H, L]`. Each
//! update can only increase the quantum Fisher information of the output.
//! [`cfi`] runs the same scheme for a fixed POVM, and [`oracles`] provides
//! independent checks (brute-force search, closed forms, Gaussian-prior
//! Bayesian Fisher information).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cfi;
pub mod channel;
pub mod error;
pub mod io;
pub mod operators;
pub mod optimizer;
pub mod oracles;
pub mod povm;
pub mod random;
pub mod sld;
pub mod validate;

pub use algebra::{ComplexMatrix, EigenDecomposition, Tolerances};
pub use channel::{DerivativeChannel, QuantumChannel};
pub use error::{Error, Result};
pub use operators::{DensityMatrix, HermitianOperator, PureState};
pub use optimizer::{InitMode, IterationRecord, OptimizationResult, OptimizerConfig};
pub use povm::Povm;
pub use validate::{Validate, Violation};
