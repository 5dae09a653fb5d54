//! Finite POVMs.

use crate::algebra::{self, c, hermitian_eig, max_abs, ComplexMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::operators::HermitianOperator;
use crate::validate::{Validate, Violation};

/// Positive operators `Pi_x` summing to the identity, one label per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<HermitianOperator>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        let povm = Self::unchecked(elements, labels)?;
        let violations = povm.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid {
                what: "POVM",
                violations,
            });
        }
        Ok(povm)
    }

    /// Checks shapes and label count only.
    pub fn unchecked(elements: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        let dim = elements
            .first()
            .map(HermitianOperator::dim)
            .ok_or_else(|| Error::Config("POVM needs at least one element".into()))?;
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if labels.len() != elements.len() {
            return Err(Error::Config(format!(
                "POVM has {} elements but {} labels",
                elements.len(),
                labels.len()
            )));
        }
        Ok(Povm {
            dim,
            elements,
            labels,
        })
    }

    /// Labels `"0", "1", ...`.
    pub fn with_default_labels(elements: Vec<HermitianOperator>) -> Result<Self> {
        let labels = (0..elements.len()).map(|k| k.to_string()).collect();
        Self::new(elements, labels)
    }

    /// Projectors onto the columns of a unitary.
    pub fn from_basis(vectors: &ComplexMatrix, labels: Vec<String>) -> Result<Self> {
        let elements = vectors
            .column_iter()
            .map(|v| HermitianOperator::hermitize(v * v.adjoint()))
            .collect();
        Self::new(elements, labels)
    }

    pub fn computational(dim: usize) -> Self {
        Self::from_basis(
            &algebra::identity(dim),
            (0..dim).map(|k| k.to_string()).collect(),
        )
        .expect("computational basis is a valid POVM")
    }

    /// Eigenbasis of `sigma_x`, outcomes `+` and `-`.
    pub fn sigma_x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = algebra::real_matrix(2, &[s, s, s, -s]);
        Self::from_basis(&v, vec!["+".into(), "-".into()]).expect("valid basis")
    }

    /// Eigenbasis of `sigma_y`, outcomes `+` and `-`.
    pub fn sigma_y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(0.0, s), c(0.0, -s)]);
        Self::from_basis(&v, vec!["+".into(), "-".into()]).expect("valid basis")
    }

    /// Projective measurement in the eigenbasis of `a` (ascending eigenvalues).
    pub fn eigenbasis(a: &HermitianOperator) -> Self {
        let eig = hermitian_eig(a);
        Self::from_basis(
            &eig.eigenvectors,
            (0..a.dim()).map(|k| k.to_string()).collect(),
        )
        .expect("eigenvectors are orthonormal")
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Povm {
            dim,
            elements: vec![HermitianOperator::identity(dim)],
            labels: vec!["1".into()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True when every element is idempotent within `tol`.
    pub fn is_projective(&self, tol: f64) -> bool {
        self.elements
            .iter()
            .all(|e| max_abs(&(e.matrix() * e.matrix() - e.matrix())) <= tol)
    }
}

impl Validate for Povm {
    fn violations(&self, tol: &Tolerances) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut sum = algebra::zeros(self.dim);
        for (e, label) in self.elements.iter().zip(&self.labels) {
            let min = hermitian_eig(e).eigenvalues[0];
            if min < -tol.psd {
                out.push(Violation::new(
                    format!("positivity of element {label}"),
                    -min,
                    tol.psd,
                ));
            }
            sum += e.matrix();
        }
        let residual = max_abs(&(sum - algebra::identity(self.dim)));
        if residual > tol.tp {
            out.push(Violation::new("completeness", residual, tol.tp));
        }
        out
    }
}
