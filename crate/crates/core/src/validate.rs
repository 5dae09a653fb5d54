//! Invariant diagnostics. Validation reports measured residuals instead of
//! failing on the first problem.

use std::fmt;

use serde::Serialize;

use crate::algebra::Tolerances;

/// A single violated invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Violation {
    pub fn new(invariant: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Violation {
            invariant: invariant.into(),
            residual,
            tolerance,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated (residual {:e} > tolerance {:e})",
            self.invariant, self.residual, self.tolerance
        )
    }
}

pub trait Validate {
    /// Empty iff every invariant holds within `tol`.
    fn violations(&self, tol: &Tolerances) -> Vec<Violation>;

    fn validate(&self) -> Vec<Violation> {
        self.violations(&Tolerances::default())
    }
}
