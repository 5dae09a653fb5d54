//! Independent reference computations used to check the optimizers.
//!
//! - brute-force search over pure inputs (Haar samples, plus a fixed Bloch
//!   grid for qubit inputs);
//! - the pure-state closed form `4 Var_psi(H)`;
//! - the Fisher information of a Gaussian-prior-smoothed outcome family,
//!   which tends to the ordinary Fisher information as the prior narrows.

use std::f64::consts::{PI, SQRT_2};

use crate::algebra::{c, hermitian_eig, ComplexVector};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::operators::{DensityMatrix, HermitianOperator, PureState};
use crate::povm::Povm;
use crate::random::{haar_state, rng_from_seed};
use crate::sld::{qfi, DEFAULT_EPS_RANK};

/// Polar and azimuthal resolution of the qubit grid (60 x 60 = 3600 states).
pub const BLOCH_GRID_STEPS: usize = 60;

/// Qubit states `cos(t/2)|0> + e^{i f} sin(t/2)|1>` on a regular grid
/// `t = i pi / 60`, `f = 2 pi j / 60`.
pub fn bloch_grid() -> Vec<PureState> {
    let n = BLOCH_GRID_STEPS;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let theta = PI * i as f64 / n as f64;
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let v = ComplexVector::from_vec(vec![
                c((theta / 2.0).cos(), 0.0),
                num_complex::Complex64::from_polar((theta / 2.0).sin(), phi),
            ]);
            out.push(PureState::normalised(v).expect("grid states are nonzero"));
        }
    }
    out
}

/// Best QFI of `ch(|psi><psi|)` over sampled pure inputs.
pub fn brute_force_max_qfi(
    ch: &QuantumChannel,
    h: &HermitianOperator,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, PureState)> {
    if h.dim() != ch.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_out(),
            found: h.dim(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut candidates: Vec<PureState> = (0..n_samples.max(1))
        .map(|_| haar_state(&mut rng, ch.dim_in()))
        .collect();
    if ch.dim_in() == 2 {
        candidates.extend(bloch_grid());
    }
    let mut best: Option<(f64, PureState)> = None;
    for psi in candidates {
        let f = qfi(
            &ch.apply(&DensityMatrix::from_pure(&psi))?,
            h,
            DEFAULT_EPS_RANK,
        )?;
        if best.as_ref().is_none_or(|(b, _)| f > *b) {
            best = Some((f, psi));
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// `4 (<H^2> - <H>^2)`.
pub fn pure_state_qfi(psi: &PureState, h: &HermitianOperator) -> f64 {
    let mean = h.expectation(psi);
    let second = h.square().expectation(psi);
    (4.0 * (second - mean * mean)).max(0.0)
}

/// `(lambda_max(H) - lambda_min(H))^2`, the largest QFI any state can reach.
pub fn qfi_upper_bound(h: &HermitianOperator) -> f64 {
    let e = hermitian_eig(h).eigenvalues;
    (e[e.len() - 1] - e[0]).powi(2)
}

/// Outcome distributions `p_phi(x)` tabulated on a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModel {
    pub phis: Vec<f64>,
    /// `probs[i][x]` is `p_{phis[i]}(x)`.
    pub probs: Vec<Vec<f64>>,
}

impl DiscreteModel {
    pub fn new(phis: Vec<f64>, probs: Vec<Vec<f64>>) -> Result<Self> {
        if phis.len() != probs.len() || phis.is_empty() {
            return Err(Error::Config(format!(
                "model has {} grid points but {} probability rows",
                phis.len(),
                probs.len()
            )));
        }
        let outcomes = probs[0].len();
        for (phi, row) in phis.iter().zip(&probs) {
            if row.len() != outcomes {
                return Err(Error::Config("probability rows differ in length".into()));
            }
            if let Some(p) = row.iter().find(|&&p| p < -1e-12) {
                return Err(Error::Config(format!(
                    "negative probability {p} at phi = {phi}"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-10 {
                return Err(Error::Config(format!("row at phi = {phi} sums to {total}")));
            }
        }
        Ok(DiscreteModel { phis, probs })
    }

    /// Tabulate `model(phi)` on `phis`.
    pub fn from_fn(phis: Vec<f64>, model: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let probs = phis.iter().map(|&p| model(p)).collect();
        Self::new(phis, probs)
    }

    pub fn outcomes(&self) -> usize {
        self.probs[0].len()
    }
}

/// Zero-mean Gaussian prior with standard deviation `delta_prior`, discretized
/// on an odd uniform grid spanning `+- grid_halfwidth * delta_prior`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrior {
    pub delta_prior: f64,
    pub grid_halfwidth: f64,
    pub grid_points: usize,
}

impl GaussianPrior {
    pub fn new(delta_prior: f64) -> Result<Self> {
        Self::with_grid(delta_prior, 6.0, 201)
    }

    pub fn with_grid(delta_prior: f64, grid_halfwidth: f64, grid_points: usize) -> Result<Self> {
        if !(delta_prior > 0.0) || !delta_prior.is_finite() {
            return Err(Error::Config(format!(
                "prior width must be positive, got {delta_prior}"
            )));
        }
        if grid_points < 5 || grid_points.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "prior grid needs an odd number (>= 5) of points, got {grid_points}"
            )));
        }
        if !(grid_halfwidth > 0.0) {
            return Err(Error::Config(format!(
                "grid half-width must be positive, got {grid_halfwidth}"
            )));
        }
        Ok(GaussianPrior {
            delta_prior,
            grid_halfwidth,
            grid_points,
        })
    }

    /// Grid nodes centred on `center`; the middle node is exactly `center`.
    pub fn grid(&self, center: f64) -> Vec<f64> {
        let m = (self.grid_points / 2) as i64;
        let step = self.grid_halfwidth * self.delta_prior / m as f64;
        (-m..=m).map(|i| center + i as f64 * step).collect()
    }

    fn variance(&self) -> f64 {
        self.delta_prior * self.delta_prior
    }
}

/// Quadrature data shared by the two Bayesian routines.
struct Quadrature {
    /// Offsets from the model's central node.
    offsets: Vec<f64>,
    /// Normalized prior times trapezoid weights.
    weights: Vec<f64>,
    step: f64,
}

fn quadrature(model: &DiscreteModel, prior: &GaussianPrior) -> Result<Quadrature> {
    let n = model.phis.len();
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "model grid needs an odd number (>= 5) of nodes, got {n}"
        )));
    }
    let step = (model.phis[n - 1] - model.phis[0]) / (n - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::Config("model grid must be increasing".into()));
    }
    for (i, w) in model.phis.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step {
            return Err(Error::Config(format!(
                "model grid is not uniform at node {i}"
            )));
        }
    }
    let center = model.phis[n / 2];
    let offsets: Vec<f64> = model.phis.iter().map(|p| p - center).collect();

    let sd = prior.delta_prior;
    let below = 0.5 * libm::erfc(-offsets[0] / (sd * SQRT_2));
    let above = 0.5 * libm::erfc(offsets[n - 1] / (sd * SQRT_2));
    if below + above > 1e-8 {
        return Err(Error::Config(format!(
            "model grid too narrow: prior mass {:e} lies outside it",
            below + above
        )));
    }

    let mut weights: Vec<f64> = offsets
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let trap = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            trap * (-x * x / (2.0 * prior.variance())).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(Quadrature {
        offsets,
        weights,
        step,
    })
}

/// Conditional-mean estimator for each outcome, 0 where the outcome has no
/// prior-averaged probability.
pub fn bayes_best_estimator(model: &DiscreteModel, prior: &GaussianPrior) -> Result<Vec<f64>> {
    let q = quadrature(model, prior)?;
    Ok(estimator_with(model, &q).0)
}

/// Returns the estimator and the prior-averaged outcome probabilities.
fn estimator_with(model: &DiscreteModel, q: &Quadrature) -> (Vec<f64>, Vec<f64>) {
    let k = model.outcomes();
    let mut num = vec![0.0; k];
    let mut den = vec![0.0; k];
    for ((row, &w), &x) in model.probs.iter().zip(&q.weights).zip(&q.offsets) {
        for o in 0..k {
            num[o] += w * row[o] * x;
            den[o] += w * row[o];
        }
    }
    let est = num
        .iter()
        .zip(&den)
        .map(|(&n, &d)| if d < 1e-300 { 0.0 } else { n / d })
        .collect();
    (est, den)
}

/// Derivative of a tabulated column: five-point central differences inside,
/// three-point next to the ends, one-sided at the ends.
fn central_difference(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                    / (12.0 * h)
            } else if i >= 1 && i + 1 < n {
                (values[i + 1] - values[i - 1]) / (2.0 * h)
            } else if i == 0 {
                (values[1] - values[0]) / h
            } else {
                (values[n - 1] - values[n - 2]) / h
            }
        })
        .collect()
}

/// Both evaluations of the Gaussian-prior Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesFisher {
    /// From prior-averaged derivatives of the outcome probabilities.
    pub from_derivatives: f64,
    /// From the average variance of the optimal Bayesian estimator.
    pub from_estimator: f64,
}

/// Largest allowed disagreement between the two evaluations.
pub const BAYES_CONSISTENCY_TOL: f64 = 1e-6;

/// Both evaluations without the consistency check.
pub fn bayes_gaussian_fi_parts(
    model: &DiscreteModel,
    prior: &GaussianPrior,
) -> Result<BayesFisher> {
    let q = quadrature(model, prior)?;
    let k = model.outcomes();

    let mut from_derivatives = 0.0;
    for o in 0..k {
        let column: Vec<f64> = model.probs.iter().map(|row| row[o]).collect();
        let deriv = central_difference(&column, q.step);
        let avg_p: f64 = q.weights.iter().zip(&column).map(|(w, p)| w * p).sum();
        let avg_dp: f64 = q.weights.iter().zip(&deriv).map(|(w, d)| w * d).sum();
        if avg_p >= 1e-300 {
            from_derivatives += avg_dp * avg_dp / avg_p;
        }
    }

    let (est, avg_p) = estimator_with(model, &q);
    let explained: f64 = est.iter().zip(&avg_p).map(|(e, p)| p * e * e).sum();
    let var = prior.variance();
    let posterior_var = var - explained;
    let from_estimator = (1.0 - posterior_var / var) / var;

    Ok(BayesFisher {
        from_derivatives,
        from_estimator,
    })
}

impl BayesFisher {
    /// The derivative-based value, provided both evaluations agree within
    /// [`BAYES_CONSISTENCY_TOL`] (relative to `max(1, F)`).
    pub fn consistent(&self) -> Result<f64> {
        let gap = (self.from_derivatives - self.from_estimator).abs();
        if gap > BAYES_CONSISTENCY_TOL * self.from_derivatives.abs().max(1.0) {
            return Err(Error::Numeric(format!(
                "Bayesian Fisher information evaluations disagree by {gap:e} ({} vs {}); refine the grid",
                self.from_derivatives, self.from_estimator
            )));
        }
        Ok(self.from_derivatives)
    }
}

/// Fisher information at the centre of the model grid of the prior-smoothed
/// family, checked against the estimator-based evaluation.
pub fn bayes_gaussian_fi(model: &DiscreteModel, prior: &GaussianPrior) -> Result<f64> {
    bayes_gaussian_fi_parts(model, prior)?.consistent()
}

/// `p_phi(x) = Tr{Pi_x e^{-i phi H} ch(|psi><psi|) e^{i phi H}}` on `phis`.
pub fn model_from_quantum(
    ch: &QuantumChannel,
    h: &HermitianOperator,
    psi: &PureState,
    povm: &Povm,
    phis: &[f64],
) -> Result<DiscreteModel> {
    if h.dim() != ch.dim_out() || povm.dim() != ch.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_out(),
            found: if h.dim() != ch.dim_out() {
                h.dim()
            } else {
                povm.dim()
            },
        });
    }
    let rho = ch.apply(&DensityMatrix::from_pure(psi))?;
    let eig = hermitian_eig(h);
    let probs = phis
        .iter()
        .map(|&phi| {
            let u = eig.map_spectrum(|l| num_complex::Complex64::from_polar(1.0, -phi * l));
            let rotated = DensityMatrix::from_matrix_unchecked(&u * rho.matrix() * u.adjoint());
            povm.elements()
                .iter()
                .map(|e| rotated.expectation(e))
                .collect()
        })
        .collect();
    DiscreteModel::new(phis.to_vec(), probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sigma_z;

    fn half_sz() -> HermitianOperator {
        HermitianOperator::new(sigma_z().scale(0.5)).unwrap()
    }

    fn sin_model(phis: Vec<f64>) -> DiscreteModel {
        DiscreteModel::from_fn(phis, |p| vec![0.5 * (1.0 + p.sin()), 0.5 * (1.0 - p.sin())])
            .unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let (f, _) = brute_force_max_qfi(
            &QuantumChannel::identity(2),
            &HermitianOperator::zeros(2),
            10,
            1,
        )
        .unwrap();
        assert_eq!(f, 0.0);
        let (f, _) = brute_force_max_qfi(&QuantumChannel::identity(2), &half_sz(), 200, 1).unwrap();
        assert!((f - 1.0).abs() < 1e-4);
        let ch = QuantumChannel::dephasing(2, 0.8).unwrap();
        let (f, _) = brute_force_max_qfi(&ch, &half_sz(), 200, 1).unwrap();
        assert!((f - 0.64).abs() < 1e-4);
    }

    #[test]
    fn pure_state_closed_form() {
        assert_eq!(pure_state_qfi(&PureState::basis(2, 1), &half_sz()), 0.0);
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        assert!((pure_state_qfi(&plus, &half_sz()) - 1.0).abs() < 1e-15);
        let h = HermitianOperator::new(crate::algebra::real_matrix(
            3,
            &[-1.0, 0., 0., 0., 0.2, 0., 0., 0., 2.5],
        ))
        .unwrap();
        let psi = PureState::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert!((pure_state_qfi(&psi, &h) - 3.5f64.powi(2)).abs() < 1e-12);
        assert!((qfi_upper_bound(&h) - 12.25).abs() < 1e-12);
    }

    #[test]
    fn prior_grid_is_symmetric_and_odd() {
        let p = GaussianPrior::new(0.1).unwrap();
        let g = p.grid(0.0);
        assert_eq!(g.len(), 201);
        assert_eq!(g[100], 0.0);
        assert!((g[0] + 0.6).abs() < 1e-15 && (g[200] - 0.6).abs() < 1e-15);
        assert!(GaussianPrior::with_grid(0.1, 6.0, 200).is_err());
        assert!(GaussianPrior::new(0.0).is_err());
    }

    #[test]
    fn constant_model_gives_prior_mean_and_zero_information() {
        let prior = GaussianPrior::new(0.2).unwrap();
        let model = DiscreteModel::from_fn(prior.grid(0.0), |_| vec![0.3, 0.7]).unwrap();
        let est = bayes_best_estimator(&model, &prior).unwrap();
        assert!(est.iter().all(|e| e.abs() < 1e-15));
        assert!(bayes_gaussian_fi(&model, &prior).unwrap().abs() < 1e-15);
    }

    #[test]
    fn sin_model_estimator_matches_closed_form() {
        // int g(phi) phi sin(phi) = D^2 exp(-D^2/2) for a N(0, D^2) prior
        let d = 0.05;
        let prior = GaussianPrior::new(d).unwrap();
        let est = bayes_best_estimator(&sin_model(prior.grid(0.0)), &prior).unwrap();
        let want = d * d * (-d * d / 2.0f64).exp();
        // the +-6 sd cutoff drops ~1e-7 of the second moment
        assert!(
            (est[0] - want).abs() < 1e-6 * want,
            "{} vs {}",
            est[0],
            want
        );
        assert!((est[1] + want).abs() < 1e-6 * want);
        assert!((est[0] - d * d).abs() < 1e-5);
    }

    #[test]
    fn sin_model_bayes_fisher_closed_form() {
        // F_g = exp(-D^2) for p = (1 +- sin phi)/2
        for d in [0.3, 0.1, 0.03, 1e-3] {
            let prior = GaussianPrior::new(d).unwrap();
            let f = bayes_gaussian_fi(&sin_model(prior.grid(0.0)), &prior).unwrap();
            assert!((f - (-d * d).exp()).abs() < 1e-8, "d={d}: {f}");
        }
    }

    #[test]
    fn narrow_grid_rejected() {
        let prior = GaussianPrior::new(0.1).unwrap();
        let phis: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.01).collect();
        assert!(matches!(
            bayes_best_estimator(&sin_model(phis), &prior),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn coarse_grid_trips_consistency_check() {
        let prior = GaussianPrior::with_grid(0.5, 6.0, 9).unwrap();
        let model = sin_model(prior.grid(0.0));
        assert!(matches!(
            bayes_gaussian_fi(&model, &prior),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn quantum_model_examples() {
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        let ch = QuantumChannel::identity(2);
        let phis: Vec<f64> = (-5..=5).map(|i| i as f64 * 0.3).collect();
        let model = model_from_quantum(&ch, &half_sz(), &plus, &Povm::sigma_x(), &phis).unwrap();
        for (phi, row) in phis.iter().zip(&model.probs) {
            assert!((row[0] - (phi / 2.0).cos().powi(2)).abs() < 1e-14);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
        let rho = ch.apply(&DensityMatrix::from_pure(&plus)).unwrap();
        let stats = crate::cfi::outcome_statistics(&rho, &half_sz(), &Povm::sigma_x()).unwrap();
        assert!((model.probs[5][0] - stats.probs[0]).abs() < 1e-15);
    }
}
