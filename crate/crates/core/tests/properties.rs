mod common;

use proptest::prelude::*;
use rand::Rng;

use qfisher::algebra::{
    anticommutator, commutator, hermitian_eig, hs_norm, max_eigpair, trace, trace_product,
    ComplexMatrix, I,
};
use qfisher::cfi::{
    cfi_objective, classical_fi, optimal_d, optimize_fixed_measurement, outcome_statistics,
    EstimatorCoefficients, DEFAULT_EPS_PROB,
};
use qfisher::channel::DerivativeChannel;
use qfisher::io::problem::{
    matrix_to_spec, parse_problem, ChannelSpec, MatrixSpec, OptimizerSpec, ProblemFile,
};
use qfisher::optimizer::{
    general_objective, objective_g, optimize, optimize_general, variational_value,
};
use qfisher::oracles::{brute_force_max_qfi, pure_state_qfi, qfi_upper_bound};
use qfisher::random::{
    haar_state, random_channel, random_density, random_hermitian, random_povm, random_unitary,
    rng_from_seed,
};
use qfisher::sld::{qfi, sld, DEFAULT_EPS_RANK};
use qfisher::{
    DensityMatrix, HermitianOperator, InitMode, OptimizerConfig, PureState, QuantumChannel,
    Tolerances, Validate,
};

use common::{random_scenario, rel};

fn cfg(seed: u64, restarts: usize) -> OptimizerConfig {
    OptimizerConfig {
        seed,
        restarts,
        max_iters: 300,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channel_preserves_trace_and_positivity(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let ch = random_channel(&mut rng, dim, dim);
        prop_assert!(ch.violations(&Tolerances::default()).is_empty());
        let rank = rng.random_range(1..=dim);
        let out = ch.apply(&random_density(&mut rng, dim, rank)).unwrap();
        prop_assert!((trace(out.matrix()).re - 1.0).abs() < 1e-10);
        prop_assert!(hermitian_eig(&out.as_hermitian()).eigenvalues[0] > -1e-10);
    }

    #[test]
    fn adjoint_duality(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let ch = random_channel(&mut rng, dim, dim);
        let a = random_hermitian(&mut rng, dim, 1.0);
        let rho = random_density(&mut rng, dim, dim);
        let lhs = trace_product(a.matrix(), ch.apply(&rho).unwrap().matrix());
        let rhs = trace_product(ch.adjoint_apply(&a).unwrap().matrix(), rho.matrix());
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn eigensolver_is_deterministic_and_accurate(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(&mut rng, dim, 2.0);
        prop_assert_eq!(hermitian_eig(&a), hermitian_eig(&a));
        let (v, lam, _) = max_eigpair(&a, 1e-9);
        prop_assert!((v.amplitudes().norm() - 1.0).abs() < 1e-12);
        let resid = (a.matrix() * v.amplitudes() - v.amplitudes() * qfisher::algebra::c(lam, 0.0)).norm();
        prop_assert!(resid <= 1e-9 * lam.abs().max(1.0));
    }

    #[test]
    fn sld_residual_mean_and_norm(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let rank = rng.random_range(1..=dim);
        let rho = random_density(&mut rng, dim, rank);
        let scale = rng.random_range(0.1..3.0);
        let h = random_hermitian(&mut rng, dim, scale);
        let s = sld(&rho, &h, DEFAULT_EPS_RANK).unwrap();
        let hn = hs_norm(h.matrix());
        prop_assert!(s.residual <= 1e-9 * hn.max(1.0));
        prop_assert!(trace_product(rho.matrix(), s.l.matrix()).norm() < 1e-9);
        prop_assert!(hs_norm(s.l.matrix()) <= 2.0 * hn + 1e-9);
        if rank == dim {
            let full = anticommutator(s.l.matrix(), rho.matrix()).unwrap().scale(0.5)
                + commutator(h.matrix(), rho.matrix()).unwrap() * I;
            prop_assert!(hs_norm(&full) <= 1e-9 * hn.max(1.0));
        }
    }

    #[test]
    fn pure_state_sld_identity(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let psi = haar_state(&mut rng, dim);
        let h = random_hermitian(&mut rng, dim, 1.0);
        let rho = DensityMatrix::from_pure(&psi);
        let s = sld(&rho, &h, DEFAULT_EPS_RANK).unwrap();
        let want = commutator(h.matrix(), rho.matrix()).unwrap() * (I * -2.0);
        prop_assert!(hs_norm(&(s.l.matrix() - want)) < 1e-9);
        prop_assert!((qfi(&rho, &h, DEFAULT_EPS_RANK).unwrap() - pure_state_qfi(&psi, &h)).abs() < 1e-9);
    }

    #[test]
    fn qfi_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from_seed(seed);
        let rank = rng.random_range(1..=dim);
        let rho = random_density(&mut rng, dim, rank);
        let h = random_hermitian(&mut rng, dim, 1.0);
        let u = random_unitary(&mut rng, dim);
        let rho_u = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        let h_u = HermitianOperator::hermitize(&u * h.matrix() * u.adjoint());
        let f = qfi(&rho, &h, DEFAULT_EPS_RANK).unwrap();
        let f_u = qfi(&rho_u, &h_u, DEFAULT_EPS_RANK).unwrap();
        prop_assert!((f - f_u).abs() < 1e-8 * f.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimizer_trace_monotone_sandwiched_and_bounded(seed in any::<u64>()) {
        let (_, ch, h) = random_scenario(seed, None);
        let c = cfg(seed, 1);
        let res = optimize(&ch, &h, &c).unwrap();
        let bound = qfi_upper_bound(&h);
        for w in res.trace.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let tol = 1e-9 * a.f_n.max(1.0);
            prop_assert!(b.f_n >= a.f_n - tol, "f decreased: {} -> {}", a.f_n, b.f_n);
            // F(rho_n, L_n) <= F(rho_{n+1}, L_n) <= F(rho_{n+1}, L_{n+1})
            let rho_n = ch.apply(&DensityMatrix::from_pure(&a.psi_n)).unwrap();
            let l_n = sld(&rho_n, &h, c.eps_rank).unwrap().l;
            let mid = variational_value(&b.psi_n, &l_n, &ch, &h).unwrap();
            prop_assert!(mid >= a.f_n - tol);
            prop_assert!(b.f_n >= mid - tol);
        }
        for r in &res.trace {
            prop_assert!(r.f_n <= bound + 1e-8);
        }
    }

    #[test]
    fn sld_maximizes_variational_value(seed in any::<u64>()) {
        let (mut rng, ch, h) = random_scenario(seed, None);
        let psi = haar_state(&mut rng, ch.dim_in());
        let rho = ch.apply(&DensityMatrix::from_pure(&psi)).unwrap();
        let l = sld(&rho, &h, DEFAULT_EPS_RANK).unwrap().l;
        let best = variational_value(&psi, &l, &ch, &h).unwrap();
        for _ in 0..20 {
            let y = random_hermitian(&mut rng, h.dim(), 1.0);
            let delta = rng.random_range(1e-3..1.0);
            let x = HermitianOperator::hermitize(l.matrix() + y.matrix().scale(delta));
            prop_assert!(variational_value(&psi, &x, &ch, &h).unwrap() <= best + 1e-9);
        }
    }

    #[test]
    fn top_eigenvector_maximizes_state_update(seed in any::<u64>()) {
        let (mut rng, ch, h) = random_scenario(seed, None);
        let psi = haar_state(&mut rng, ch.dim_in());
        let rho = ch.apply(&DensityMatrix::from_pure(&psi)).unwrap();
        let l = sld(&rho, &h, DEFAULT_EPS_RANK).unwrap().l;
        let m = ch.adjoint_apply(&objective_g(&l, &h).unwrap()).unwrap();
        let (next, _, _) = max_eigpair(&m, 1e-9);
        let top = m.expectation(&next);
        for _ in 0..20 {
            prop_assert!(m.expectation(&haar_state(&mut rng, ch.dim_in())) <= top + 1e-12);
        }
    }

    #[test]
    fn classical_fi_bounded_by_qfi(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let dim = rng.random_range(2..=4);
        let rank = rng.random_range(1..=dim);
        let rho = random_density(&mut rng, dim, rank);
        let h = random_hermitian(&mut rng, dim, 1.0);
        let outcomes = rng.random_range(2..=5);
        let povm = random_povm(&mut rng, dim, outcomes);
        let stats = outcome_statistics(&rho, &h, &povm).unwrap();
        prop_assert!(classical_fi(&stats, DEFAULT_EPS_PROB) <= qfi(&rho, &h, DEFAULT_EPS_RANK).unwrap() + 1e-8);
    }

    #[test]
    fn optimal_coefficients_identity_and_optimality(seed in any::<u64>()) {
        let (mut rng, ch, h) = random_scenario(seed, None);
        let dim = ch.dim_in();
        let outcomes = rng.random_range(2..=5);
        let povm = random_povm(&mut rng, dim, outcomes);
        let psi = haar_state(&mut rng, dim);
        let rho = ch.apply(&DensityMatrix::from_pure(&psi)).unwrap();
        let stats = outcome_statistics(&rho, &h, &povm).unwrap();
        let f = classical_fi(&stats, DEFAULT_EPS_PROB);
        let d_l = optimal_d(&rho, &h, &povm, DEFAULT_EPS_PROB).unwrap();
        let at_opt = cfi_objective(&psi, &d_l, &ch, &h, &povm).unwrap();
        prop_assert!((at_opt - f).abs() < 1e-10 * f.max(1.0));
        let mean: f64 = stats.probs.iter().zip(&d_l.values).map(|(p, d)| p * d).sum();
        prop_assert!(mean.abs() < 1e-10);
        for _ in 0..20 {
            let values = d_l.values.iter().map(|v| v + rng.random_range(-1.0..1.0)).collect();
            let d = EstimatorCoefficients::for_povm(&povm, values).unwrap();
            prop_assert!(cfi_objective(&psi, &d, &ch, &h, &povm).unwrap() <= at_opt + 1e-9);
        }
    }

    #[test]
    fn fixed_measurement_traces_monotone(seed in any::<u64>()) {
        let (mut rng, ch, h) = random_scenario(seed, None);
        let povm = random_povm(&mut rng, ch.dim_out(), 3);
        let res = optimize_fixed_measurement(&ch, &h, &povm, &cfg(seed, 1)).unwrap();
        for w in res.trace.windows(2) {
            prop_assert!(w[1].f_n >= w[0].f_n - 1e-9 * w[0].f_n.max(1.0));
        }
        for r in &res.trace {
            let rho = ch.apply(&DensityMatrix::from_pure(&r.psi_n)).unwrap();
            prop_assert!(r.f_n <= qfi(&rho, &h, DEFAULT_EPS_RANK).unwrap() + 1e-8);
        }
    }

    #[test]
    fn general_objective_reduces_to_phase_objective(seed in any::<u64>()) {
        let (mut rng, ch, h) = random_scenario(seed, None);
        let dch = DerivativeChannel::rotate_after(&ch, &h).unwrap();
        let x = random_hermitian(&mut rng, h.dim(), 1.0);
        let a = general_objective(&x, &ch, &dch).unwrap();
        let b = ch.adjoint_apply(&objective_g(&x, &h).unwrap()).unwrap();
        prop_assert!(hs_norm(&(a.matrix() - b.matrix())) < 1e-8);
    }

    #[test]
    fn brute_force_respects_spectral_bound(seed in any::<u64>()) {
        let (_, ch, h) = random_scenario(seed, None);
        let (f, _) = brute_force_max_qfi(&ch, &h, 50, seed).unwrap();
        prop_assert!(f <= qfi_upper_bound(&h) + 1e-8);
    }
}

fn spec_of(m: &ComplexMatrix) -> MatrixSpec {
    matrix_to_spec(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn problem_files_round_trip(seed in any::<u64>(), dim in 2usize..=4, explicit in any::<bool>()) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(&mut rng, dim, 1.0);
        let channel = if explicit {
            let ch = random_channel(&mut rng, dim, dim);
            ChannelSpec { kraus: Some(ch.kraus().iter().map(spec_of).collect()), ..Default::default() }
        } else {
            ChannelSpec { preset: Some("depolarizing".into()), p: Some(rng.random_range(0.0..1.0)), ..Default::default() }
        };
        let file = ProblemFile {
            dim,
            generator: spec_of(h.matrix()),
            channel,
            povm: None,
            derivative_channel: None,
            state: None,
            optimizer: OptimizerSpec { seed: Some(seed >> 1), tol: Some(rng.random_range(1e-12..1e-6)), ..Default::default() },
            tolerances: None,
            bayes: None,
            oracle: None,
        }
        .with_defaults();
        let text = file.to_toml().unwrap();
        let again = parse_problem(&text).unwrap();
        prop_assert_eq!(&file, &again);
        prop_assert_eq!(again.to_toml().unwrap(), text);
    }
}

#[test]
fn general_optimizer_matches_phase_optimizer() {
    for seed in 0..5u64 {
        let (_, ch, h) = random_scenario(seed, None);
        let dch = DerivativeChannel::rotate_after(&ch, &h).unwrap();
        let c = cfg(seed, 4);
        let a = optimize(&ch, &h, &c).unwrap();
        let b = optimize_general(&ch, &dch, &c).unwrap();
        assert!(
            rel(a.f_star, b.f_star) < 1e-7,
            "seed {seed}: {} vs {}",
            a.f_star,
            b.f_star
        );
    }
}

#[test]
fn uniform_initialisation_is_reproducible() {
    let (_, ch, h) = random_scenario(3, Some(3));
    let c = OptimizerConfig {
        init_mode: InitMode::UniformSuperposition,
        restarts: 1,
        ..Default::default()
    };
    let a = optimize(&ch, &h, &c).unwrap();
    assert_eq!(a, optimize(&ch, &h, &c).unwrap());
    assert_eq!(a.trace[0].psi_n, PureState::uniform(3));
}

#[test]
fn restarts_are_deterministic_under_parallelism() {
    let (_, ch, h) = random_scenario(17, Some(4));
    let c = cfg(99, 8);
    let runs: Vec<_> = (0..3).map(|_| optimize(&ch, &h, &c).unwrap()).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn channel_with_wider_output() {
    // qubit input, qutrit output
    let mut rng = rng_from_seed(5);
    let ch: QuantumChannel = random_channel(&mut rng, 2, 3);
    let h = random_hermitian(&mut rng, 3, 1.0);
    let res = optimize(&ch, &h, &cfg(5, 4)).unwrap();
    let (oracle, _) = brute_force_max_qfi(&ch, &h, 500, 5).unwrap();
    assert!(res.f_star >= oracle - 1e-4);
}
