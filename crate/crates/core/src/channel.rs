//! Quantum channels in Kraus form and derivative maps of channel families.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{
    self, c, hermiticity_residual, max_abs, unitary_from_hermitian, ComplexMatrix, Tolerances, I,
};
use crate::error::{Error, Result};
use crate::operators::{DensityMatrix, HermitianOperator};
use crate::validate::{Validate, Violation};

/// Default step for central-difference derivative channels.
pub const DEFAULT_FD_DELTA: f64 = 1e-5;

/// Completely positive trace-preserving map `rho -> sum_k K_k rho K_k^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

fn kraus_shape(kraus: &[ComplexMatrix]) -> Result<(usize, usize)> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::Config("channel needs at least one Kraus operator".into()))?;
    let (rows, cols) = first.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    for k in kraus {
        if k.shape() != (rows, cols) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: k.nrows(),
            });
        }
    }
    Ok((cols, rows))
}

impl QuantumChannel {
    /// Checked constructor: trace preservation must hold within the default tolerance.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerances(kraus, &Tolerances::default())
    }

    pub fn with_tolerances(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let ch = Self::unchecked(kraus)?;
        let violations = ch.violations(tol);
        if !violations.is_empty() {
            return Err(Error::Invalid {
                what: "channel",
                violations,
            });
        }
        Ok(ch)
    }

    /// Only the Kraus shapes are checked; use [`Validate`] for the rest.
    pub fn unchecked(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (dim_in, dim_out) = kraus_shape(&kraus)?;
        Ok(QuantumChannel {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn identity(dim: usize) -> Self {
        QuantumChannel {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![algebra::identity(dim)],
        }
    }

    /// Conjugation by `exp(-i A)`.
    pub fn unitary(exponent: &HermitianOperator) -> Self {
        let dim = exponent.dim();
        QuantumChannel {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![unitary_from_hermitian(exponent, 1.0)],
        }
    }

    /// Dephasing in the computational basis: off-diagonal entries scale by `eta`.
    ///
    /// The qubit case uses `{sqrt((1+eta)/2) I, sqrt((1-eta)/2) sigma_z}`.
    pub fn dephasing(dim: usize, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Config(format!(
                "dephasing eta must lie in [0, 1], got {eta}"
            )));
        }
        let kraus = if dim == 2 {
            vec![
                algebra::identity(2).scale(((1.0 + eta) / 2.0).sqrt()),
                algebra::sigma_z().scale(((1.0 - eta) / 2.0).sqrt()),
            ]
        } else {
            let mut ks = vec![algebra::identity(dim).scale(eta.sqrt())];
            for j in 0..dim {
                let mut p = algebra::zeros(dim);
                p[(j, j)] = c((1.0 - eta).sqrt(), 0.0);
                ks.push(p);
            }
            ks
        };
        Self::unchecked(kraus)
    }

    /// `rho -> (1 - p) rho + p I / dim`, Kraus operators from the Weyl basis.
    pub fn depolarizing(dim: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!(
                "depolarizing p must lie in [0, 1], got {p}"
            )));
        }
        let d2 = (dim * dim) as f64;
        let mut kraus = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let w = weyl(dim, a, b);
                let weight = if a == 0 && b == 0 {
                    1.0 - p + p / d2
                } else {
                    p / d2
                };
                kraus.push(w.scale(weight.sqrt()));
            }
        }
        Self::unchecked(kraus)
    }

    /// Decay of every excited level to `|0>` with probability `gamma`.
    pub fn amplitude_damping(dim: usize, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) || dim < 2 {
            return Err(Error::Config(format!(
                "amplitude damping needs dim >= 2 and gamma in [0, 1], got dim {dim}, gamma {gamma}"
            )));
        }
        let mut k0 = algebra::zeros(dim);
        k0[(0, 0)] = c(1.0, 0.0);
        for j in 1..dim {
            k0[(j, j)] = c((1.0 - gamma).sqrt(), 0.0);
        }
        let mut kraus = vec![k0];
        for j in 1..dim {
            let mut k = algebra::zeros(dim);
            k[(0, j)] = c(gamma.sqrt(), 0.0);
            kraus.push(k);
        }
        Self::unchecked(kraus)
    }

    /// This channel followed by conjugation with `u`.
    pub fn then_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dim_out || u.ncols() != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: self.dim_out,
                found: u.nrows(),
            });
        }
        Self::unchecked(self.kraus.iter().map(|k| u * k).collect())
    }

    /// `sum_k K_k rho K_k^dag`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho.dim())?;
        let m = self.apply_matrix(rho.matrix());
        Ok(DensityMatrix::from_matrix_unchecked(
            algebra::hermitian_part(&m),
        ))
    }

    pub(crate) fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += k * m * k.adjoint();
        }
        out
    }

    /// Heisenberg picture `sum_k K_k^dag A K_k`.
    pub fn adjoint_apply(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        if a.dim() != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: self.dim_out,
                found: a.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out += k.adjoint() * a.matrix() * k;
        }
        Ok(HermitianOperator::hermitize(out))
    }

    fn check_input(&self, dim: usize) -> Result<()> {
        if dim != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: dim,
            });
        }
        Ok(())
    }
}

impl Validate for QuantumChannel {
    fn violations(&self, tol: &Tolerances) -> Vec<Violation> {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        let residual = max_abs(&(sum - algebra::identity(self.dim_in)));
        if residual > tol.tp {
            vec![Violation::new("trace preservation", residual, tol.tp)]
        } else {
            Vec::new()
        }
    }
}

/// `rho -> sum_k A_k rho B_k^dag`, typically the derivative of a channel family.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeChannel {
    dim_in: usize,
    dim_out: usize,
    terms: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl DerivativeChannel {
    pub fn new(
        dim_in: usize,
        dim_out: usize,
        terms: Vec<(ComplexMatrix, ComplexMatrix)>,
    ) -> Result<Self> {
        for (a, b) in &terms {
            for m in [a, b] {
                if m.shape() != (dim_out, dim_in) {
                    return Err(Error::DimensionMismatch {
                        expected: dim_out,
                        found: m.nrows(),
                    });
                }
            }
        }
        Ok(DerivativeChannel {
            dim_in,
            dim_out,
            terms,
        })
    }

    pub fn zero(dim_in: usize, dim_out: usize) -> Self {
        DerivativeChannel {
            dim_in,
            dim_out,
            terms: Vec::new(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn terms(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.terms
    }

    /// Derivative at `phi = 0` of `rho -> e^{-i phi H} ch(rho) e^{i phi H}`.
    pub fn rotate_after(ch: &QuantumChannel, h: &HermitianOperator) -> Result<Self> {
        if h.dim() != ch.dim_out() {
            return Err(Error::DimensionMismatch {
                expected: ch.dim_out(),
                found: h.dim(),
            });
        }
        let mih = h.matrix() * -I;
        let mut terms = Vec::with_capacity(2 * ch.kraus().len());
        for k in ch.kraus() {
            let hk = &mih * k;
            terms.push((hk.clone(), k.clone()));
            terms.push((k.clone(), hk));
        }
        Self::new(ch.dim_in(), ch.dim_out(), terms)
    }

    /// Derivative at `phi = 0` of `rho -> ch(e^{-i phi H} rho e^{i phi H})`.
    pub fn rotate_before(ch: &QuantumChannel, h: &HermitianOperator) -> Result<Self> {
        if h.dim() != ch.dim_in() {
            return Err(Error::DimensionMismatch {
                expected: ch.dim_in(),
                found: h.dim(),
            });
        }
        let mih = h.matrix() * -I;
        let mut terms = Vec::with_capacity(2 * ch.kraus().len());
        for k in ch.kraus() {
            let kh = k * &mih;
            terms.push((kh.clone(), k.clone()));
            terms.push((k.clone(), kh));
        }
        Self::new(ch.dim_in(), ch.dim_out(), terms)
    }

    /// Central difference `(plus - minus) / (2 delta)` as a pair list.
    pub fn finite_difference(
        plus: &QuantumChannel,
        minus: &QuantumChannel,
        delta: f64,
    ) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Config(format!(
                "finite-difference step must be positive, got {delta}"
            )));
        }
        if plus.dim_in() != minus.dim_in() || plus.dim_out() != minus.dim_out() {
            return Err(Error::DimensionMismatch {
                expected: plus.dim_out(),
                found: minus.dim_out(),
            });
        }
        let s = 1.0 / (2.0 * delta);
        let mut terms = Vec::new();
        for k in plus.kraus() {
            terms.push((k.scale(s), k.clone()));
        }
        for k in minus.kraus() {
            terms.push((k.scale(-s), k.clone()));
        }
        Self::new(plus.dim_in(), plus.dim_out(), terms)
    }

    /// Central difference of a channel family around `phi`.
    pub fn from_family<F>(family: F, phi: f64, delta: f64) -> Result<Self>
    where
        F: Fn(f64) -> Result<QuantumChannel>,
    {
        Self::finite_difference(&family(phi + delta)?, &family(phi - delta)?, delta)
    }

    /// `sum_k A_k rho B_k^dag`.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.nrows() != self.dim_in || m.ncols() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: m.nrows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for (a, b) in &self.terms {
            out += a * m * b.adjoint();
        }
        Ok(out)
    }

    /// Upper bound on `|sum_k A_k X B_k^dag|` entries per unit `|X|`, used to
    /// scale round-off tolerances.
    fn magnitude(&self) -> f64 {
        let d = self.dim_in.max(self.dim_out) as f64;
        self.terms
            .iter()
            .map(|(a, b)| max_abs(a) * max_abs(b) * d * d)
            .sum::<f64>()
            .max(1.0)
    }

    /// Adjoint action `Y -> sum_k B_k^dag Y A_k`, Hermitized.
    ///
    /// Fails when the unsymmetrized result is not Hermitian within `eps_herm`
    /// (scaled by operator magnitudes), i.e. the map does not preserve
    /// Hermiticity.
    pub fn adjoint_apply(&self, y: &HermitianOperator, eps_herm: f64) -> Result<HermitianOperator> {
        if y.dim() != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: self.dim_out,
                found: y.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for (a, b) in &self.terms {
            out += b.adjoint() * y.matrix() * a;
        }
        let residual = hermiticity_residual(&out) / 2.0;
        let bound = eps_herm * self.magnitude() * max_abs(y.matrix()).max(1.0);
        if residual > bound {
            return Err(Error::NotHermitian { residual });
        }
        Ok(HermitianOperator::hermitize(out))
    }
}

/// Hermitian basis `{E_jj, E_jk + E_kj, i(E_jk - E_kj)}`.
pub(crate) fn hermitian_basis(dim: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for k in j..dim {
            if j == k {
                let mut e = algebra::zeros(dim);
                e[(j, j)] = c(1.0, 0.0);
                out.push(e);
            } else {
                let mut s = algebra::zeros(dim);
                s[(j, k)] = c(1.0, 0.0);
                s[(k, j)] = c(1.0, 0.0);
                out.push(s);
                let mut a = algebra::zeros(dim);
                a[(j, k)] = c(0.0, 1.0);
                a[(k, j)] = c(0.0, -1.0);
                out.push(a);
            }
        }
    }
    out
}

impl Validate for DerivativeChannel {
    fn violations(&self, tol: &Tolerances) -> Vec<Violation> {
        let mut out = Vec::new();
        let scale = self.magnitude();
        let herm_tol = tol.herm * scale;
        let worst = hermitian_basis(self.dim_in)
            .iter()
            .map(|e| {
                hermiticity_residual(&self.apply_matrix(e).expect("basis has input dimension"))
            })
            .fold(0.0, f64::max);
        if worst > herm_tol {
            out.push(Violation::new("hermiticity preservation", worst, herm_tol));
        }
        // Tr{sum A rho B^dag} = Tr{rho sum B^dag A} must vanish for every rho.
        let mut s = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for (a, b) in &self.terms {
            s += b.adjoint() * a;
        }
        let tr_tol = tol.tp * scale;
        let residual = max_abs(&s);
        if residual > tr_tol {
            out.push(Violation::new("trace annihilation", residual, tr_tol));
        }
        out
    }
}

/// Weyl operator `X^a Z^b` in dimension `dim`.
fn weyl(dim: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut w = algebra::zeros(dim);
    for j in 0..dim {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * ((b * j) % dim) as f64 / dim as f64);
        w[((j + a) % dim, j)] = phase;
    }
    w
}
