//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The Hermitian eigensolver is
//! nalgebra's `SymmetricEigen`, post-processed into ascending order with a
//! fixed phase convention so that results are reproducible bit-for-bit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{HermitianOperator, PureState};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Numerical tolerances for the type invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-entry bound on `A - A^dag`.
    pub herm: f64,
    /// Allowed negative eigenvalue magnitude.
    pub psd: f64,
    /// Trace preservation / POVM completeness (max-entry residual).
    pub tp: f64,
    /// Unit trace of density matrices.
    pub trace: f64,
    /// Unit norm of pure states.
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-12,
            psd: 1e-10,
            tp: 1e-10,
            trace: 1e-12,
            norm: 1e-12,
        }
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn zeros(dim: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(dim, dim)
}

/// Build a matrix from real row-major entries.
pub fn real_matrix(dim: usize, rows: &[f64]) -> ComplexMatrix {
    assert_eq!(rows.len(), dim * dim);
    ComplexMatrix::from_row_iterator(dim, dim, rows.iter().map(|&x| c(x, 0.0)))
}

/// Pauli matrices.
pub fn sigma_x() -> ComplexMatrix {
    real_matrix(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> ComplexMatrix {
    real_matrix(2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr{a b}` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `(m + m^dag) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Max-entry distance between `m` and its adjoint.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    let da = check_square(a)?;
    let db = check_square(b)?;
    if da != db {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: db,
        });
    }
    Ok(())
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    Ok(a * b - b * a)
}

/// `ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    Ok(a * b + b * a)
}

/// Spectral decomposition `A = V diag(eigenvalues) V^dag`.
///
/// Eigenvalues ascend; each eigenvector column has its largest-magnitude
/// component real and positive (first such index on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| c(l, 0.0)));
        &self.eigenvectors * ComplexMatrix::from_diagonal(&d) * self.eigenvectors.adjoint()
    }

    /// Change of basis `V^dag m V`.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint() * m * &self.eigenvectors
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }

    /// `f(A)` for a real function of the spectrum, as a complex matrix.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let d = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| f(l)));
        &self.eigenvectors * ComplexMatrix::from_diagonal(&d) * self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a matrix assumed Hermitian; only the lower triangle
/// is read by the underlying solver, so callers hermitize first.
pub(crate) fn eigh(m: &ComplexMatrix) -> EigenDecomposition {
    let n = m.nrows();
    let sym = hermitian_part(m);
    let eig = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let mut pivot = 0;
        let mut best = -1.0;
        for (i, z) in col.iter().enumerate() {
            let a = z.norm();
            if a > best {
                best = a;
                pivot = i;
            }
        }
        let norm = col.norm();
        let phase = if best > 0.0 {
            col[pivot].conj() / best
        } else {
            c(1.0, 0.0)
        };
        for i in 0..n {
            eigenvectors[(i, dst)] = col[i] * phase / norm;
        }
        // pivot exactly real after the rotation
        eigenvectors[(pivot, dst)] = c(eigenvectors[(pivot, dst)].norm(), 0.0);
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eig(a: &HermitianOperator) -> EigenDecomposition {
    eigh(a.matrix())
}

/// Eigenvector of the largest eigenvalue.
///
/// The flag is set when the second-largest eigenvalue lies within
/// `eps_deg * max(1, |lambda_max|)` of the largest. Under degeneracy the
/// lowest-index eigenvector of the top cluster is returned.
pub fn max_eigvec(a: &HermitianOperator, eps_deg: f64) -> (PureState, bool) {
    let (psi, _, degenerate) = max_eigpair(a, eps_deg);
    (psi, degenerate)
}

/// Like [`max_eigvec`] but also returns the top eigenvalue.
pub fn max_eigpair(a: &HermitianOperator, eps_deg: f64) -> (PureState, f64, bool) {
    let eig = hermitian_eig(a);
    let n = eig.dim();
    let top = eig.eigenvalues[n - 1];
    let window = eps_deg * top.abs().max(1.0);
    let first = eig
        .eigenvalues
        .iter()
        .position(|&l| top - l <= window)
        .unwrap_or(n - 1);
    let degenerate = first < n - 1;
    let v = eig.eigenvector(first);
    (PureState::from_normalised_unchecked(v), top, degenerate)
}

/// `exp(-i t A)` for Hermitian `A`.
pub fn unitary_from_hermitian(a: &HermitianOperator, t: f64) -> ComplexMatrix {
    hermitian_eig(a).map_spectrum(|l| Complex64::from_polar(1.0, -t * l))
}
