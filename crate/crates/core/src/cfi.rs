//! Classical Fisher information of a fixed POVM, its variational form, and
//! the alternating optimizer over channel inputs.
//!
//! For estimator coefficients `D(x)` define the moment operators
//! `X_j = sum_x D(x)^j Pi_x`. The Fisher information of the measurement on
//! `ch(|psi><psi|)` is the maximum over `D` of
//! `<psi| ch^dag(-X_2 + 2i[H, X_1]) |psi>`, attained at
//! `D_L(x) = dp(x) / p(x)` on the support of `p`.

use serde::Serialize;

use crate::algebra::{self, commutator, max_eigpair, ComplexMatrix, I};
use crate::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::operators::{DensityMatrix, HermitianOperator, PureState};
use crate::optimizer::{
    self, AlternatingProblem, IterationRecord, OptimizationResult, OptimizerConfig, StepOutcome,
};
use crate::povm::Povm;
use crate::sld::{is_irreducible, phase_derivative};

pub const DEFAULT_EPS_PROB: f64 = 1e-12;

/// One coefficient per POVM outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorCoefficients {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

impl EstimatorCoefficients {
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::Config(format!(
                "{} labels for {} coefficients",
                labels.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "estimator coefficient {v} is not finite"
            )));
        }
        Ok(EstimatorCoefficients { labels, values })
    }

    /// Coefficients aligned with the outcomes of `povm`.
    pub fn for_povm(povm: &Povm, values: Vec<f64>) -> Result<Self> {
        Self::new(povm.labels().to_vec(), values)
    }
}

/// Outcome probabilities and their derivatives at the working point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeStatistics {
    pub probs: Vec<f64>,
    pub dprobs: Vec<f64>,
}

/// `p(x) = Tr{rho Pi_x}`, `dp(x) = Tr{-i[H, rho] Pi_x}`.
pub fn outcome_statistics(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    povm: &Povm,
) -> Result<OutcomeStatistics> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: povm.dim(),
        });
    }
    let drho = phase_derivative(rho, h)?;
    let probs: Vec<f64> = povm.elements().iter().map(|e| rho.expectation(e)).collect();
    let dprobs: Vec<f64> = povm
        .elements()
        .iter()
        .map(|e| algebra::trace_product(drho.matrix(), e.matrix()).re)
        .collect();

    let tol = algebra::Tolerances::default();
    let total: f64 = probs.iter().sum();
    let dtotal: f64 = dprobs.iter().sum();
    let scale = algebra::max_abs(h.matrix()).max(1.0);
    if let Some(p) = probs.iter().find(|&&p| p < -tol.psd) {
        return Err(Error::Numeric(format!("negative outcome probability {p}")));
    }
    if (total - 1.0).abs() > 1e-10 || dtotal.abs() > 1e-10 * scale {
        return Err(Error::Numeric(format!(
            "outcome statistics inconsistent: sum p = {total}, sum dp = {dtotal}"
        )));
    }
    Ok(OutcomeStatistics { probs, dprobs })
}

/// `sum over p(x) > eps_prob of dp(x)^2 / p(x)`.
pub fn classical_fi(stats: &OutcomeStatistics, eps_prob: f64) -> f64 {
    stats
        .probs
        .iter()
        .zip(&stats.dprobs)
        .filter(|(&p, _)| p > eps_prob)
        .map(|(&p, &dp)| dp * dp / p)
        .sum()
}

/// `D_L(x) = dp(x) / p(x)` where `p(x) > eps_prob`, zero elsewhere.
pub fn optimal_d(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    povm: &Povm,
    eps_prob: f64,
) -> Result<EstimatorCoefficients> {
    let stats = outcome_statistics(rho, h, povm)?;
    Ok(optimal_d_from_stats(&stats, povm, eps_prob))
}

fn optimal_d_from_stats(
    stats: &OutcomeStatistics,
    povm: &Povm,
    eps_prob: f64,
) -> EstimatorCoefficients {
    let values = stats
        .probs
        .iter()
        .zip(&stats.dprobs)
        .map(|(&p, &dp)| if p > eps_prob { dp / p } else { 0.0 })
        .collect();
    EstimatorCoefficients {
        labels: povm.labels().to_vec(),
        values,
    }
}

/// `X_j = sum_x D(x)^j Pi_x`.
pub fn x_moment(d: &EstimatorCoefficients, povm: &Povm, j: u32) -> Result<HermitianOperator> {
    if !(1..=2).contains(&j) {
        return Err(Error::Config(format!(
            "moment order must be 1 or 2, got {j}"
        )));
    }
    if d.labels != povm.labels() {
        return Err(Error::Config(
            "estimator coefficient labels do not match the POVM outcomes".into(),
        ));
    }
    let mut out = ComplexMatrix::zeros(povm.dim(), povm.dim());
    for (e, &v) in povm.elements().iter().zip(&d.values) {
        out += e.matrix().scale(v.powi(j as i32));
    }
    Ok(HermitianOperator::hermitize(out))
}

fn cfi_operator(
    d: &EstimatorCoefficients,
    ch: &QuantumChannel,
    h: &HermitianOperator,
    povm: &Povm,
) -> Result<HermitianOperator> {
    let x1 = x_moment(d, povm, 1)?;
    let x2 = x_moment(d, povm, 2)?;
    let g = commutator(h.matrix(), x1.matrix())? * (I * 2.0) - x2.matrix();
    ch.adjoint_apply(&HermitianOperator::hermitize(g))
}

fn check_dims(ch: &QuantumChannel, h: &HermitianOperator, povm: &Povm) -> Result<()> {
    for found in [h.dim(), povm.dim()] {
        if found != ch.dim_out() {
            return Err(Error::DimensionMismatch {
                expected: ch.dim_out(),
                found,
            });
        }
    }
    Ok(())
}

/// `<psi| ch^dag(-X_2 + 2i[H, X_1]) |psi>`.
pub fn cfi_objective(
    psi: &PureState,
    d: &EstimatorCoefficients,
    ch: &QuantumChannel,
    h: &HermitianOperator,
    povm: &Povm,
) -> Result<f64> {
    check_dims(ch, h, povm)?;
    if psi.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_in(),
            found: psi.dim(),
        });
    }
    Ok(cfi_operator(d, ch, h, povm)?.expectation(psi))
}

struct FixedMeasurementProblem<'a> {
    ch: &'a QuantumChannel,
    h: &'a HermitianOperator,
    povm: &'a Povm,
}

impl AlternatingProblem for FixedMeasurementProblem<'_> {
    fn dim_in(&self) -> usize {
        self.ch.dim_in()
    }

    fn step(&self, psi: &PureState, n: usize, cfg: &OptimizerConfig) -> Result<StepOutcome> {
        let rho = self.ch.apply(&DensityMatrix::from_pure(psi))?;
        let stats = outcome_statistics(&rho, self.h, self.povm)?;
        let f_n = classical_fi(&stats, DEFAULT_EPS_PROB);
        let d = optimal_d_from_stats(&stats, self.povm, DEFAULT_EPS_PROB);
        let m = cfi_operator(&d, self.ch, self.h, self.povm)?;
        let (next, top, degenerate_step) = max_eigpair(&m, cfg.eps_deg);

        let spectrum = algebra::eigh(rho.matrix()).eigenvalues;
        let cutoff = cfg.eps_rank * spectrum[spectrum.len() - 1];
        let rank_deficit = spectrum.iter().filter(|&&l| l <= cutoff).count();
        let record = IterationRecord {
            n,
            f_n,
            psi_n: psi.clone(),
            degenerate_step,
            sld_rank_deficit: rank_deficit,
            irreducible: is_irreducible(&rho, self.h, optimizer::EPS_COUPLING),
            sld_residual: 0.0,
            state_gain: top - m.expectation(psi),
        };
        Ok(StepOutcome { next, record })
    }
}

/// Maximum Fisher information of a fixed POVM over inputs to `ch`.
pub fn optimize_fixed_measurement(
    ch: &QuantumChannel,
    h: &HermitianOperator,
    povm: &Povm,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    check_dims(ch, h, povm)?;
    optimizer::run(&FixedMeasurementProblem { ch, h, povm }, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{max_abs, sigma_y, sigma_z};

    fn half_sz() -> HermitianOperator {
        HermitianOperator::new(sigma_z().scale(0.5)).unwrap()
    }

    fn plus_rho() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::from_real(&[1.0, 1.0]).unwrap())
    }

    #[test]
    fn statistics_examples() {
        let s = outcome_statistics(
            &DensityMatrix::maximally_mixed(2),
            &half_sz(),
            &Povm::computational(2),
        )
        .unwrap();
        assert_eq!(s.probs, vec![0.5, 0.5]);

        let s = outcome_statistics(&plus_rho(), &half_sz(), &Povm::sigma_y()).unwrap();
        for (got, want) in s.probs.iter().zip([0.5, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        for (got, want) in s.dprobs.iter().zip([0.5, -0.5]) {
            assert!((got - want).abs() < 1e-15);
        }

        let s = outcome_statistics(&plus_rho(), &half_sz(), &Povm::computational(2)).unwrap();
        assert!(s.dprobs.iter().all(|d| d.abs() < 1e-15));
    }

    #[test]
    fn classical_fi_examples() {
        let zero = OutcomeStatistics {
            probs: vec![0.3, 0.7],
            dprobs: vec![0.0, 0.0],
        };
        assert_eq!(classical_fi(&zero, DEFAULT_EPS_PROB), 0.0);
        let s = OutcomeStatistics {
            probs: vec![0.5, 0.5],
            dprobs: vec![0.5, -0.5],
        };
        assert!((classical_fi(&s, DEFAULT_EPS_PROB) - 1.0).abs() < 1e-15);
        let s = OutcomeStatistics {
            probs: vec![1.0, 0.0],
            dprobs: vec![0.0, 0.0],
        };
        assert_eq!(classical_fi(&s, DEFAULT_EPS_PROB), 0.0);
    }

    #[test]
    fn optimal_d_examples() {
        let rho = DensityMatrix::new(algebra::real_matrix(2, &[0.6, 0.0, 0.0, 0.4])).unwrap();
        let d = optimal_d(&rho, &half_sz(), &Povm::sigma_y(), DEFAULT_EPS_PROB).unwrap();
        assert!(d.values.iter().all(|v| v.abs() < 1e-15));

        let d = optimal_d(&plus_rho(), &half_sz(), &Povm::sigma_y(), DEFAULT_EPS_PROB).unwrap();
        assert!((d.values[0] - 1.0).abs() < 1e-14 && (d.values[1] + 1.0).abs() < 1e-14);

        // |0> measured in the computational basis: outcome 1 has p = 0
        let rho = DensityMatrix::from_pure(&PureState::basis(2, 0));
        let d = optimal_d(&rho, &half_sz(), &Povm::computational(2), DEFAULT_EPS_PROB).unwrap();
        assert_eq!(d.values[1], 0.0);
    }

    #[test]
    fn moment_examples() {
        let povm = Povm::computational(3);
        let d = EstimatorCoefficients::for_povm(&povm, vec![0.7; 3]).unwrap();
        let x1 = x_moment(&d, &povm, 1).unwrap();
        let x2 = x_moment(&d, &povm, 2).unwrap();
        assert!(max_abs(&(x1.matrix() - algebra::identity(3).scale(0.7))) < 1e-15);
        assert!(max_abs(&(x2.matrix() - algebra::identity(3).scale(0.49))) < 1e-15);

        let povm = Povm::sigma_y();
        let d = EstimatorCoefficients::for_povm(&povm, vec![1.0, -1.0]).unwrap();
        let x1 = x_moment(&d, &povm, 1).unwrap();
        let x2 = x_moment(&d, &povm, 2).unwrap();
        assert!(max_abs(&(x1.matrix() - sigma_y())) < 1e-15);
        assert!(max_abs(&(x2.matrix() - algebra::identity(2))) < 1e-15);
        assert!(max_abs(&(x1.square().matrix() - x2.matrix())) < 1e-12);

        let bad = EstimatorCoefficients::new(vec!["a".into(), "b".into()], vec![1.0, 2.0]).unwrap();
        assert!(x_moment(&bad, &povm, 1).is_err());
        assert!(x_moment(&d, &povm, 3).is_err());
    }

    #[test]
    fn objective_zero_and_identity() {
        let ch = QuantumChannel::dephasing(2, 0.7).unwrap();
        let povm = Povm::sigma_y();
        let psi = PureState::from_real(&[0.8, 0.6]).unwrap();
        let zero = EstimatorCoefficients::for_povm(&povm, vec![0.0, 0.0]).unwrap();
        assert_eq!(
            cfi_objective(&psi, &zero, &ch, &half_sz(), &povm).unwrap(),
            0.0
        );

        let rho = ch.apply(&DensityMatrix::from_pure(&psi)).unwrap();
        let d = optimal_d(&rho, &half_sz(), &povm, DEFAULT_EPS_PROB).unwrap();
        let lhs = cfi_objective(&psi, &d, &ch, &half_sz(), &povm).unwrap();
        let rhs = classical_fi(
            &outcome_statistics(&rho, &half_sz(), &povm).unwrap(),
            DEFAULT_EPS_PROB,
        );
        assert!((lhs - rhs).abs() < 1e-12);

        let mut worse = d.clone();
        worse.values[0] += 0.05;
        assert!(cfi_objective(&psi, &worse, &ch, &half_sz(), &povm).unwrap() < lhs);
    }

    #[test]
    fn single_outcome_povm_has_no_information() {
        let res = optimize_fixed_measurement(
            &QuantumChannel::identity(2),
            &half_sz(),
            &Povm::trivial(2),
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert_eq!(res.f_star, 0.0);
    }
}
