//! Command dispatch.

use std::fmt;

use crate::cfi::{classical_fi, optimize_fixed_measurement, outcome_statistics, DEFAULT_EPS_PROB};
use crate::error::Result;
use crate::io::problem::{matrix_to_spec, ProblemFile};
use crate::io::report::RunReport;
use crate::operators::DensityMatrix;
use crate::optimizer::{optimize, optimize_general};
use crate::oracles::{
    bayes_gaussian_fi_parts, brute_force_max_qfi, model_from_quantum, qfi_upper_bound,
};
use crate::sld::{fisher_from_sld, sld};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Maximize QFI over inputs for the phase family of the generator.
    QfiMax,
    /// Maximize QFI for the family given by `[derivative_channel]`.
    QfiMaxGeneral,
    /// Maximize the Fisher information of the `[povm]` measurement.
    CfiMax,
    /// SLD of the channel output for `[state]`.
    Sld,
    /// QFI of the channel output for `[state]`.
    QfiEval,
    /// Fisher information of `[povm]` on the channel output for `[state]`.
    CfiEval,
    /// Gaussian-prior Fisher information versus the classical value.
    BayesCheck,
    /// Brute-force search over pure inputs.
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::QfiMax => "qfi-max",
            Command::QfiMaxGeneral => "qfi-max-general",
            Command::CfiMax => "cfi-max",
            Command::Sld => "sld",
            Command::QfiEval => "qfi-eval",
            Command::CfiEval => "cfi-eval",
            Command::BayesCheck => "bayes-check",
            Command::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Run `cmd` on a problem whose overrides are already applied.
pub fn run_command(cmd: Command, file: &ProblemFile) -> Result<RunReport> {
    let p = file.resolve()?;
    let echo = file.with_defaults();
    let name = cmd.name();
    let h = &p.generator;
    let ch = &p.channel;
    let report = match cmd {
        Command::QfiMax => {
            RunReport::from_optimization(name, &optimize(ch, h, &p.optimizer)?, &echo)
        }
        Command::QfiMaxGeneral => {
            let res = optimize_general(ch, p.require_derivative()?, &p.optimizer)?;
            RunReport::from_optimization(name, &res, &echo)
        }
        Command::CfiMax => {
            let res = optimize_fixed_measurement(ch, h, p.require_povm()?, &p.optimizer)?;
            RunReport::from_optimization(name, &res, &echo)
        }
        Command::Sld => {
            let psi = p.require_state()?;
            let rho = ch.apply(&DensityMatrix::from_pure(psi))?;
            let s = sld(&rho, h, p.optimizer.eps_rank)?;
            let mut r = RunReport::evaluation(name, fisher_from_sld(&rho, &s.l), psi, &echo);
            r.values.insert("rank".into(), s.rank as f64);
            r.values.insert("residual".into(), s.residual);
            r.operators
                .insert("sld".into(), matrix_to_spec(s.l.matrix()));
            r.operators
                .insert("rho".into(), matrix_to_spec(rho.matrix()));
            r
        }
        Command::QfiEval => {
            let psi = p.require_state()?;
            let rho = ch.apply(&DensityMatrix::from_pure(psi))?;
            let s = sld(&rho, h, p.optimizer.eps_rank)?;
            let mut r = RunReport::evaluation(name, fisher_from_sld(&rho, &s.l), psi, &echo);
            r.values.insert("rank".into(), s.rank as f64);
            r
        }
        Command::CfiEval => {
            let psi = p.require_state()?;
            let rho = ch.apply(&DensityMatrix::from_pure(psi))?;
            let stats = outcome_statistics(&rho, h, p.require_povm()?)?;
            let mut r =
                RunReport::evaluation(name, classical_fi(&stats, DEFAULT_EPS_PROB), psi, &echo);
            r.values.insert(
                "qfi".into(),
                fisher_from_sld(&rho, &sld(&rho, h, p.optimizer.eps_rank)?.l),
            );
            r
        }
        Command::BayesCheck => {
            let psi = p.require_state()?;
            let povm = p.require_povm()?;
            let bayes = p.require_bayes()?;
            let phis = bayes.prior.grid(bayes.reference_phi);
            let model = model_from_quantum(ch, h, psi, povm, &phis)?;
            let parts = bayes_gaussian_fi_parts(&model, &bayes.prior)?;
            let f = parts.consistent()?;
            let rho = ch.apply(&DensityMatrix::from_pure(psi))?;
            let u = crate::algebra::unitary_from_hermitian(h, bayes.reference_phi);
            let rotated = DensityMatrix::from_matrix_unchecked(&u * rho.matrix() * u.adjoint());
            let direct = classical_fi(&outcome_statistics(&rotated, h, povm)?, DEFAULT_EPS_PROB);
            let mut r = RunReport::evaluation(name, f, psi, &echo);
            r.values
                .insert("bayes_fi_from_estimator".into(), parts.from_estimator);
            r.values.insert("classical_fi".into(), direct);
            r.values
                .insert("delta_prior".into(), bayes.prior.delta_prior);
            r.values.insert("reference_phi".into(), bayes.reference_phi);
            r
        }
        Command::Oracle => {
            let (f, psi) = brute_force_max_qfi(ch, h, p.oracle_samples, p.optimizer.seed)?;
            let mut r = RunReport::evaluation(name, f, &psi, &echo);
            r.values.insert("samples".into(), p.oracle_samples as f64);
            r.values.insert("upper_bound".into(), qfi_upper_bound(h));
            r
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::problem::parse_problem;

    const QUBIT: &str = r#"
dim = 2
generator = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]]
[state]
amplitudes = [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]
"#;

    fn file(extra: &str) -> ProblemFile {
        parse_problem(&format!("{QUBIT}{extra}")).unwrap()
    }

    #[test]
    fn qfi_max_identity_channel() {
        let mut f = file("[channel]\npreset = \"identity\"\n");
        f.optimizer.seed = Some(7);
        let r = run_command(Command::QfiMax, &f).unwrap();
        assert!((r.f_star - 1.0).abs() < 1e-8);
        assert_eq!(r.trace.len(), r.iterations);
    }

    #[test]
    fn sld_of_plus_state() {
        let r = run_command(Command::Sld, &file("[channel]\npreset = \"identity\"\n")).unwrap();
        let l = &r.operators["sld"];
        let sy = [[[0.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [0.0, 0.0]]];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert!((l[i][j][k] - sy[i][j][k]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn oracle_on_dephasing() {
        let r = run_command(
            Command::Oracle,
            &file("[channel]\npreset = \"dephasing\"\neta = 0.8\n"),
        )
        .unwrap();
        assert!((r.f_star - 0.64).abs() < 1e-4);
    }

    #[test]
    fn missing_sections_reported() {
        let f = file("[channel]\npreset = \"identity\"\n");
        let err = run_command(Command::CfiMax, &f).unwrap_err();
        assert!(err.to_string().contains("povm"));
        assert!(run_command(Command::QfiMaxGeneral, &f).is_err());
        assert!(run_command(Command::BayesCheck, &f).is_err());
    }

    #[test]
    fn cfi_eval_and_bayes_check() {
        let f = file("[channel]\npreset = \"identity\"\n[povm]\npreset = \"sigma_y\"\n[bayes]\ndelta_prior = 0.001\n");
        let r = run_command(Command::CfiEval, &f).unwrap();
        assert!((r.f_star - 1.0).abs() < 1e-12);
        assert!((r.values["qfi"] - 1.0).abs() < 1e-12);
        let r = run_command(Command::BayesCheck, &f).unwrap();
        assert!((r.f_star - r.values["classical_fi"]).abs() < 1e-3);
    }
}
