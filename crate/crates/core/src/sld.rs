//! Symmetric logarithmic derivative and quantum Fisher information.
//!
//! The SLD `L` of `rho` with respect to a right-hand side `R` solves
//! `(L rho + rho L) / 2 = R`. For the phase family generated by `H` the
//! right-hand side is `-i[H, rho]`, and the quantum Fisher information is
//! `Tr{rho L^2}`.
//!
//! The equation is solved entry-wise in the eigenbasis of `rho`. Eigenvalues
//! at or below `eps_rank * lambda_max` are treated as zero. The block of `L`
//! acting within that numerical kernel is not determined by the equation and
//! is set to zero.

use crate::algebra::{self, anticommutator, commutator, eigh, hs_norm, ComplexMatrix, I};
use crate::error::{Error, Result};
use crate::operators::{DensityMatrix, HermitianOperator};

pub const DEFAULT_EPS_RANK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SldResult {
    pub l: HermitianOperator,
    /// Numerical rank of `rho`.
    pub rank: usize,
    /// `dim - rank`; nonzero means the kernel block of `L` was fixed to zero.
    pub support_dim_deficit: usize,
    /// `||(L rho + rho L)/2 - R||_HS` over every block except kernel-kernel.
    pub residual: f64,
}

fn check_eps_rank(eps_rank: f64) -> Result<()> {
    if !(eps_rank > 0.0 && eps_rank < 1.0) {
        return Err(Error::Config(format!(
            "eps_rank must lie in (0, 1), got {eps_rank}"
        )));
    }
    Ok(())
}

/// Solve `(X rho + rho X)/2 = r` for Hermitian `X`.
pub fn solve_sld_rhs(
    rho: &DensityMatrix,
    r: &HermitianOperator,
    eps_rank: f64,
) -> Result<SldResult> {
    check_eps_rank(eps_rank)?;
    if rho.dim() != r.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: r.dim(),
        });
    }
    let n = rho.dim();
    let eig = eigh(rho.matrix());
    let lambda_max = eig.eigenvalues[n - 1];
    if !(lambda_max > 0.0) {
        return Err(Error::Numeric(
            "density matrix has no positive eigenvalue".into(),
        ));
    }
    let cutoff = eps_rank * lambda_max;
    let support: Vec<bool> = eig.eigenvalues.iter().map(|&l| l > cutoff).collect();
    let lam: Vec<f64> = eig
        .eigenvalues
        .iter()
        .zip(&support)
        .map(|(&l, &s)| if s { l } else { 0.0 })
        .collect();

    let r_eig = eig.to_eigenbasis(r.matrix());
    let mut x = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            if support[j] || support[k] {
                x[(j, k)] = r_eig[(j, k)] * (2.0 / (lam[j] + lam[k]));
            }
        }
    }
    let l = HermitianOperator::hermitize(eig.from_eigenbasis(&x));

    let mismatch = anticommutator(l.matrix(), rho.matrix())?.scale(0.5) - r.matrix();
    let mut mismatch = eig.to_eigenbasis(&mismatch);
    for j in 0..n {
        for k in 0..n {
            if !support[j] && !support[k] {
                mismatch[(j, k)] = algebra::c(0.0, 0.0);
            }
        }
    }
    let rank = support.iter().filter(|&&s| s).count();
    Ok(SldResult {
        l,
        rank,
        support_dim_deficit: n - rank,
        residual: hs_norm(&mismatch),
    })
}

/// `-i[H, rho]`, the derivative of `e^{-i phi H} rho e^{i phi H}` at zero.
pub fn phase_derivative(rho: &DensityMatrix, h: &HermitianOperator) -> Result<HermitianOperator> {
    let comm = commutator(h.matrix(), rho.matrix())?;
    Ok(HermitianOperator::hermitize(comm * -I))
}

/// SLD of the phase family generated by `h`.
pub fn sld(rho: &DensityMatrix, h: &HermitianOperator, eps_rank: f64) -> Result<SldResult> {
    solve_sld_rhs(rho, &phase_derivative(rho, h)?, eps_rank)
}

/// `Tr{rho L^2}` for a given SLD.
pub fn fisher_from_sld(rho: &DensityMatrix, l: &HermitianOperator) -> f64 {
    rho.expectation(&l.square()).max(0.0)
}

/// Quantum Fisher information of `rho` for the phase family generated by `h`.
pub fn qfi(rho: &DensityMatrix, h: &HermitianOperator, eps_rank: f64) -> Result<f64> {
    let s = sld(rho, h, eps_rank)?;
    Ok(fisher_from_sld(rho, &s.l))
}

/// Whether `rho` couples all eigenspaces of `h` into a single block.
///
/// Eigenspaces of `h` are grouped by eigenvalue (gaps `<= eps * max(1, spread)`
/// merge), two groups are linked when some entry of `rho` between them, in
/// the eigenbasis of `h`, exceeds `eps` in magnitude. Irreducible means the
/// resulting graph is connected.
pub fn is_irreducible(rho: &DensityMatrix, h: &HermitianOperator, eps: f64) -> bool {
    let n = h.dim();
    if n != rho.dim() {
        return false;
    }
    let eig = eigh(h.matrix());
    let spread = (eig.eigenvalues[n - 1] - eig.eigenvalues[0]).abs().max(1.0);
    let mut group = vec![0usize; n];
    for j in 1..n {
        group[j] = if eig.eigenvalues[j] - eig.eigenvalues[j - 1] <= eps * spread {
            group[j - 1]
        } else {
            group[j - 1] + 1
        };
    }
    let n_groups = group[n - 1] + 1;
    if n_groups == 1 {
        return true;
    }
    let rho_h = eig.to_eigenbasis(rho.matrix());
    let mut adjacent = vec![vec![false; n_groups]; n_groups];
    for j in 0..n {
        for k in 0..n {
            if group[j] != group[k] && rho_h[(j, k)].norm() > eps {
                adjacent[group[j]][group[k]] = true;
            }
        }
    }
    let mut seen = vec![false; n_groups];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(g) = stack.pop() {
        for (other, &linked) in adjacent[g].iter().enumerate() {
            if linked && !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, max_abs, real_matrix, sigma_x, sigma_y, sigma_z};
    use crate::operators::PureState;

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::new(m).unwrap()
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::from_real(&[1.0, 1.0]).unwrap())
    }

    fn half_sz() -> HermitianOperator {
        herm(sigma_z().scale(0.5))
    }

    #[test]
    fn isotropic_rho() {
        let rho = DensityMatrix::maximally_mixed(2);
        let s = solve_sld_rhs(&rho, &herm(sigma_y().scale(0.5)), DEFAULT_EPS_RANK).unwrap();
        assert!(max_abs(&(s.l.matrix() - sigma_y())) < 1e-14);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn pure_plus_state() {
        let rho = plus();
        let r = phase_derivative(&rho, &half_sz()).unwrap();
        assert!(max_abs(&(r.matrix() - sigma_y().scale(0.5))) < 1e-15);
        let s = solve_sld_rhs(&rho, &r, DEFAULT_EPS_RANK).unwrap();
        assert!(max_abs(&(s.l.matrix() - sigma_y())) < 1e-14);
        assert_eq!(s.rank, 1);
        assert_eq!(s.support_dim_deficit, 1);
        assert!(s.residual < 1e-14);
        assert!((qfi(&rho, &half_sz(), DEFAULT_EPS_RANK).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_rhs() {
        let rho = DensityMatrix::new(real_matrix(2, &[0.9, 0.0, 0.0, 0.1])).unwrap();
        let s = solve_sld_rhs(&rho, &HermitianOperator::zeros(2), DEFAULT_EPS_RANK).unwrap();
        assert_eq!(max_abs(s.l.matrix()), 0.0);
    }

    #[test]
    fn commuting_rho_has_zero_sld() {
        let rho = DensityMatrix::new(real_matrix(2, &[0.7, 0.0, 0.0, 0.3])).unwrap();
        let s = sld(&rho, &half_sz(), DEFAULT_EPS_RANK).unwrap();
        assert!(max_abs(s.l.matrix()) < 1e-15);
        assert_eq!(qfi(&rho, &half_sz(), DEFAULT_EPS_RANK).unwrap(), 0.0);
    }

    #[test]
    fn dephased_plus_state() {
        let rho = DensityMatrix::new((identity(2) + sigma_x().scale(0.8)).scale(0.5)).unwrap();
        let s = sld(&rho, &half_sz(), DEFAULT_EPS_RANK).unwrap();
        assert!(max_abs(&(s.l.matrix() - sigma_y().scale(0.8))) < 1e-14);
        assert!((qfi(&rho, &half_sz(), DEFAULT_EPS_RANK).unwrap() - 0.64).abs() < 1e-14);
    }

    #[test]
    fn pure_state_identity() {
        // L = -2i[H, rho] and F = 4 Var(H) for pure states
        let psi = PureState::from_real(&[0.3, -0.5, 0.8]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let h = herm(real_matrix(
            3,
            &[1.0, 0.2, 0.0, 0.2, -0.5, 0.4, 0.0, 0.4, 0.3],
        ));
        let s = sld(&rho, &h, DEFAULT_EPS_RANK).unwrap();
        let want = commutator(h.matrix(), rho.matrix()).unwrap() * (I * -2.0);
        assert!(max_abs(&(s.l.matrix() - want)) < 1e-12);
        let var = h.square().expectation(&psi) - h.expectation(&psi).powi(2);
        assert!((qfi(&rho, &h, DEFAULT_EPS_RANK).unwrap() - 4.0 * var).abs() < 1e-12);
    }

    #[test]
    fn bad_eps_rank() {
        assert!(sld(&plus(), &half_sz(), 0.0).is_err());
        assert!(sld(&plus(), &half_sz(), 1.0).is_err());
    }

    #[test]
    fn irreducibility_examples() {
        let sz = herm(sigma_z());
        assert!(!is_irreducible(
            &DensityMatrix::maximally_mixed(2),
            &sz,
            1e-12
        ));
        assert!(is_irreducible(&plus(), &sz, 1e-12));

        let h = herm(real_matrix(3, &[0., 0., 0., 0., 1., 0., 0., 0., 2.]));
        let rho = DensityMatrix::new(real_matrix(
            3,
            &[0.25, 0.25, 0.0, 0.25, 0.25, 0.0, 0.0, 0.0, 0.5],
        ))
        .unwrap();
        assert!(!is_irreducible(&rho, &h, 1e-12));
        let psi = PureState::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!(is_irreducible(&DensityMatrix::from_pure(&psi), &h, 1e-12));
    }

    #[test]
    fn degenerate_generator_groups_eigenspaces() {
        // H = diag(0, 0, 1): coupling between the degenerate pair is irrelevant
        let h = herm(real_matrix(3, &[0., 0., 0., 0., 0., 0., 0., 0., 1.]));
        let psi = PureState::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert!(!is_irreducible(&DensityMatrix::from_pure(&psi), &h, 1e-12));
        let psi = PureState::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert!(is_irreducible(&DensityMatrix::from_pure(&psi), &h, 1e-12));
    }
}
