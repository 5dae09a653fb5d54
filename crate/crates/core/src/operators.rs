//! Validated operator and state types.

use num_complex::Complex64;

use crate::algebra::{
    self, c, hermitian_part, hermiticity_residual, ComplexMatrix, ComplexVector, Tolerances,
};
use crate::error::{Error, Result};
use crate::validate::{Validate, Violation};

/// A self-adjoint operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Checked constructor using the default Hermiticity tolerance.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::default().herm)
    }

    pub fn with_tolerance(m: ComplexMatrix, eps_herm: f64) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let residual = hermiticity_residual(&m);
        if residual > eps_herm {
            return Err(Error::NotHermitian { residual });
        }
        Ok(HermitianOperator(hermitian_part(&m)))
    }

    /// Projects onto the Hermitian part. Used for computed quantities that
    /// are Hermitian in exact arithmetic.
    pub fn hermitize(m: ComplexMatrix) -> Self {
        HermitianOperator(hermitian_part(&m))
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator(algebra::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator(algebra::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator(self.0.scale(s))
    }

    /// `<psi|A|psi>`, real for Hermitian `A`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        psi.amplitudes().dotc(&(&self.0 * psi.amplitudes())).re
    }

    pub fn square(&self) -> Self {
        HermitianOperator::hermitize(&self.0 * &self.0)
    }
}

/// A unit-trace positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let candidate = DensityMatrix(m);
        let violations = candidate.violations(tol);
        if !violations.is_empty() {
            return Err(Error::Invalid {
                what: "density matrix",
                violations,
            });
        }
        Ok(DensityMatrix(hermitian_part(&candidate.0)))
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        DensityMatrix(v * v.adjoint())
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(algebra::identity(dim).scale(1.0 / dim as f64))
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        DensityMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn as_hermitian(&self) -> HermitianOperator {
        HermitianOperator(self.0.clone())
    }

    /// `Tr{rho A}`.
    pub fn expectation(&self, a: &HermitianOperator) -> f64 {
        algebra::trace_product(&self.0, a.matrix()).re
    }
}

impl Validate for DensityMatrix {
    fn violations(&self, tol: &Tolerances) -> Vec<Violation> {
        let m = &self.0;
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return vec![Violation::new("square", f64::INFINITY, 0.0)];
        }
        let mut out = Vec::new();
        let herm = hermiticity_residual(m);
        if herm > tol.herm {
            out.push(Violation::new("hermitian", herm, tol.herm));
        }
        let tr = algebra::trace(m);
        let tr_res = (tr - c(1.0, 0.0)).norm();
        if tr_res > tol.trace {
            out.push(Violation::new("unit trace", tr_res, tol.trace));
        }
        let min_eig = algebra::eigh(m).eigenvalues[0];
        if min_eig < -tol.psd {
            out.push(Violation::new("positive semidefinite", -min_eig, tol.psd));
        }
        out
    }
}

/// A normalised state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(ComplexVector);

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > Tolerances::default().norm {
            return Err(Error::NotNormalised { norm });
        }
        Ok(PureState(amplitudes))
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalised(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalised { norm });
        }
        Ok(PureState(amplitudes.unscale(norm)))
    }

    pub(crate) fn from_normalised_unchecked(v: ComplexVector) -> Self {
        PureState(v)
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = ComplexVector::zeros(dim);
        v[k] = c(1.0, 0.0);
        PureState(v)
    }

    /// Equal-weight superposition of the computational basis.
    pub fn uniform(dim: usize) -> Self {
        PureState(ComplexVector::from_element(
            dim,
            c(1.0 / (dim as f64).sqrt(), 0.0),
        ))
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalised(ComplexVector::from_iterator(
            amps.len(),
            amps.iter().map(|&x| c(x, 0.0)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.0
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.0.dotc(&other.0).norm()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.0.dotc(&other.0)
    }
}
