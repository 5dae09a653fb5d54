//! Alternating maximization of the quantum Fisher information over channel
//! inputs.
//!
//! With `G(X) = -X^2 + 2i[H, X]` and `F(rho, X) = Tr{rho G(X)}`, the maximum
//! QFI over inputs equals the supremum of `<psi| ch^dag(G(X)) |psi>` over
//! Hermitian `X` and unit vectors `psi`. For fixed `rho` the optimal `X` is
//! the SLD of `rho`, for fixed `X` the optimal input is the top eigenvector of
//! `ch^dag(G(X))`. Alternating the two updates gives a nondecreasing
//! sequence `f_n = F(rho_n, L_n)` of quantum Fisher informations.
//!
//! The same loop drives the general-family variant, where the parameter
//! enters through an arbitrary channel family with derivative map `ch'`,
//! and the fixed-measurement variant in [`crate::cfi`].

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{max_eigpair, ComplexMatrix, I};
use crate::channel::{DerivativeChannel, QuantumChannel};
use crate::error::{Error, Result};
use crate::operators::{DensityMatrix, HermitianOperator, PureState};
use crate::random::{haar_state, rng_for_stream};
use crate::sld::{fisher_from_sld, is_irreducible, sld, solve_sld_rhs};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Coupling threshold for the reducibility diagnostic.
pub const EPS_COUPLING: f64 = 1e-9;

/// Residual above which an SLD solve is reported as inexact.
pub const EPS_SLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum InitMode {
    RandomHaar,
    UniformSuperposition,
    UserSupplied(PureState),
}

impl InitMode {
    pub fn name(&self) -> &'static str {
        match self {
            InitMode::RandomHaar => "random_haar",
            InitMode::UniformSuperposition => "uniform_superposition",
            InitMode::UserSupplied(_) => "user_supplied",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Relative objective-change stop.
    pub tol: f64,
    pub max_iters: usize,
    pub eps_rank: f64,
    pub eps_deg: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Restart 0 uses this; later restarts are always Haar-random.
    pub init_mode: InitMode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            tol: 1e-10,
            max_iters: 1000,
            eps_rank: crate::sld::DEFAULT_EPS_RANK,
            eps_deg: 1e-9,
            restarts: 8,
            seed: DEFAULT_SEED,
            init_mode: InitMode::RandomHaar,
        }
    }
}

impl OptimizerConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters < 1 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.restarts < 1 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if !(self.eps_rank > 0.0 && self.eps_rank < 1.0) {
            return Err(Error::Config(format!(
                "eps_rank must lie in (0, 1), got {}",
                self.eps_rank
            )));
        }
        if !(self.eps_deg >= 0.0) {
            return Err(Error::Config(format!(
                "eps_deg must be non-negative, got {}",
                self.eps_deg
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub n: usize,
    /// Objective at `psi_n`.
    pub f_n: f64,
    pub psi_n: PureState,
    /// The top eigenvalue used to pick `psi_{n+1}` was degenerate.
    pub degenerate_step: bool,
    pub sld_rank_deficit: usize,
    /// Always true when no generator is involved (general-family path).
    pub irreducible: bool,
    /// Residual of the X-update linear solve.
    pub sld_residual: f64,
    /// `lambda_max(M) - <psi_n|M|psi_n>`: how much the state update can gain
    /// for the current `X`.
    pub state_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub index: usize,
    pub f_star: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub f_star: f64,
    pub psi_star: PureState,
    /// Trace of the winning restart.
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub warnings: Vec<String>,
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
}

impl OptimizationResult {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

/// `-X^2 + 2i[H, X]`.
pub fn objective_g(x: &HermitianOperator, h: &HermitianOperator) -> Result<HermitianOperator> {
    Ok(HermitianOperator::hermitize(objective_g_raw(x, h)?))
}

fn objective_g_raw(x: &HermitianOperator, h: &HermitianOperator) -> Result<ComplexMatrix> {
    let comm = crate::algebra::commutator(h.matrix(), x.matrix())?;
    Ok(comm * (I * 2.0) - x.matrix() * x.matrix())
}

fn real_part_checked(z: num_complex::Complex64, scale: f64) -> Result<f64> {
    if z.im.abs() > 1e-8 * scale.max(1.0) {
        return Err(Error::Numeric(format!(
            "variational value has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `<psi| ch^dag(G(X)) |psi>`.
pub fn variational_value(
    psi: &PureState,
    x: &HermitianOperator,
    ch: &QuantumChannel,
    h: &HermitianOperator,
) -> Result<f64> {
    if psi.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_in(),
            found: psi.dim(),
        });
    }
    if h.dim() != ch.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_out(),
            found: h.dim(),
        });
    }
    let g = objective_g_raw(x, h)?;
    let mut m = ComplexMatrix::zeros(ch.dim_in(), ch.dim_in());
    for k in ch.kraus() {
        m += k.adjoint() * &g * k;
    }
    let v = psi.amplitudes();
    real_part_checked(v.dotc(&(&m * v)), crate::algebra::max_abs(&g))
}

/// One alternating update from a given input state.
pub(crate) struct StepOutcome {
    pub next: PureState,
    pub record: IterationRecord,
}

pub(crate) trait AlternatingProblem: Sync {
    fn dim_in(&self) -> usize;
    fn step(&self, psi: &PureState, n: usize, cfg: &OptimizerConfig) -> Result<StepOutcome>;
}

struct PhaseProblem<'a> {
    ch: &'a QuantumChannel,
    h: &'a HermitianOperator,
}

impl AlternatingProblem for PhaseProblem<'_> {
    fn dim_in(&self) -> usize {
        self.ch.dim_in()
    }

    fn step(&self, psi: &PureState, n: usize, cfg: &OptimizerConfig) -> Result<StepOutcome> {
        let rho = self.ch.apply(&DensityMatrix::from_pure(psi))?;
        let s = sld(&rho, self.h, cfg.eps_rank)?;
        let f_n = fisher_from_sld(&rho, &s.l);
        let m = self.ch.adjoint_apply(&objective_g(&s.l, self.h)?)?;
        let (next, top, degenerate_step) = max_eigpair(&m, cfg.eps_deg);
        let record = IterationRecord {
            n,
            f_n,
            psi_n: psi.clone(),
            degenerate_step,
            sld_rank_deficit: s.support_dim_deficit,
            irreducible: is_irreducible(&rho, self.h, EPS_COUPLING),
            sld_residual: s.residual,
            state_gain: top - m.expectation(psi),
        };
        Ok(StepOutcome { next, record })
    }
}

/// A single alternating update: SLD of the current output, then the top
/// eigenvector of `ch^dag(G(L))`. The record describes `psi_n`.
pub fn step(
    psi_n: &PureState,
    ch: &QuantumChannel,
    h: &HermitianOperator,
    cfg: &OptimizerConfig,
) -> Result<(PureState, IterationRecord)> {
    check_phase_dims(ch, h, psi_n.dim())?;
    let out = PhaseProblem { ch, h }.step(psi_n, 0, cfg)?;
    Ok((out.next, out.record))
}

fn check_phase_dims(ch: &QuantumChannel, h: &HermitianOperator, dim_in: usize) -> Result<()> {
    if h.dim() != ch.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_out(),
            found: h.dim(),
        });
    }
    if dim_in != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_in(),
            found: dim_in,
        });
    }
    Ok(())
}

/// Maximum QFI over inputs to `ch` for the phase family generated by `h`.
pub fn optimize(
    ch: &QuantumChannel,
    h: &HermitianOperator,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    check_phase_dims(ch, h, ch.dim_in())?;
    run(&PhaseProblem { ch, h }, cfg)
}

/// `-ch^dag(X^2) + 2 ch'^dag(X)`.
pub fn general_objective(
    x: &HermitianOperator,
    ch: &QuantumChannel,
    dch: &DerivativeChannel,
) -> Result<HermitianOperator> {
    if dch.dim_in() != ch.dim_in() || dch.dim_out() != ch.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_out(),
            found: dch.dim_out(),
        });
    }
    let a = ch.adjoint_apply(&x.square())?;
    let b = dch.adjoint_apply(x, crate::algebra::Tolerances::default().herm)?;
    Ok(HermitianOperator::hermitize(
        b.matrix().scale(2.0) - a.matrix(),
    ))
}

struct GeneralProblem<'a> {
    ch: &'a QuantumChannel,
    dch: &'a DerivativeChannel,
}

impl AlternatingProblem for GeneralProblem<'_> {
    fn dim_in(&self) -> usize {
        self.ch.dim_in()
    }

    fn step(&self, psi: &PureState, n: usize, cfg: &OptimizerConfig) -> Result<StepOutcome> {
        let sigma = DensityMatrix::from_pure(psi);
        let rho = self.ch.apply(&sigma)?;
        let rhs = HermitianOperator::hermitize(self.dch.apply_matrix(sigma.matrix())?);
        let s = solve_sld_rhs(&rho, &rhs, cfg.eps_rank)?;
        let m = general_objective(&s.l, self.ch, self.dch)?;
        let f_n = m.expectation(psi);
        let (next, top, degenerate_step) = max_eigpair(&m, cfg.eps_deg);
        let record = IterationRecord {
            n,
            f_n,
            psi_n: psi.clone(),
            degenerate_step,
            sld_rank_deficit: s.support_dim_deficit,
            irreducible: true,
            sld_residual: s.residual,
            state_gain: top - f_n,
        };
        Ok(StepOutcome { next, record })
    }
}

/// Maximum QFI over inputs for a general family with value `ch` and
/// derivative `dch` at the working point.
pub fn optimize_general(
    ch: &QuantumChannel,
    dch: &DerivativeChannel,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if dch.dim_in() != ch.dim_in() || dch.dim_out() != ch.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_out(),
            found: dch.dim_out(),
        });
    }
    run(&GeneralProblem { ch, dch }, cfg)
}

fn initial_state(dim: usize, restart: usize, cfg: &OptimizerConfig) -> Result<PureState> {
    match (&cfg.init_mode, restart) {
        (InitMode::UniformSuperposition, 0) => Ok(PureState::uniform(dim)),
        (InitMode::UserSupplied(psi), 0) => {
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: psi.dim(),
                });
            }
            Ok(psi.clone())
        }
        _ => Ok(haar_state(
            &mut rng_for_stream(cfg.seed, restart as u64),
            dim,
        )),
    }
}

struct SingleRun {
    trace: Vec<IterationRecord>,
    converged: bool,
}

fn run_single(
    problem: &dyn AlternatingProblem,
    psi0: PureState,
    cfg: &OptimizerConfig,
) -> Result<SingleRun> {
    let mut psi = psi0;
    let mut trace: Vec<IterationRecord> = Vec::new();
    for n in 0..cfg.max_iters {
        let StepOutcome { next, record } = problem.step(&psi, n, cfg)?;
        if !record.f_n.is_finite() {
            return Err(Error::Numeric(format!(
                "objective is not finite at iteration {n}"
            )));
        }
        let scale = record.f_n.abs().max(1.0);
        let stationary = record.state_gain <= cfg.tol * scale;
        let stalled = trace
            .last()
            .is_some_and(|prev| (record.f_n - prev.f_n).abs() <= cfg.tol * prev.f_n.abs().max(1.0));
        trace.push(record);
        if stationary || stalled {
            return Ok(SingleRun {
                trace,
                converged: true,
            });
        }
        psi = next;
    }
    Ok(SingleRun {
        trace,
        converged: false,
    })
}

fn summarize_warnings(trace: &[IterationRecord], converged: bool, max_iters: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut flag = |what: &str, hits: Vec<usize>| {
        if let Some(first) = hits.first() {
            out.push(format!(
                "{what} at {} of {} iterations (first at n={first})",
                hits.len(),
                trace.len()
            ));
        }
    };
    flag(
        "degenerate maximum eigenvalue in the state update",
        trace
            .iter()
            .filter(|r| r.degenerate_step)
            .map(|r| r.n)
            .collect(),
    );
    flag(
        "rank-deficient output state, SLD kernel block set to zero",
        trace
            .iter()
            .filter(|r| r.sld_rank_deficit > 0)
            .map(|r| r.n)
            .collect(),
    );
    flag(
        "output state reducible with respect to the generator eigenspaces",
        trace
            .iter()
            .filter(|r| !r.irreducible)
            .map(|r| r.n)
            .collect(),
    );
    flag(
        "SLD equation not solvable on the kernel of the output state",
        trace
            .iter()
            .filter(|r| r.sld_residual > EPS_SLD * r.f_n.abs().max(1.0))
            .map(|r| r.n)
            .collect(),
    );
    if !converged {
        out.push(format!(
            "stopping rule not met within {max_iters} iterations"
        ));
    }
    out
}

pub(crate) fn run(
    problem: &dyn AlternatingProblem,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    cfg.check()?;
    let dim = problem.dim_in();
    let runs: Vec<SingleRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_single(problem, initial_state(dim, r, cfg)?, cfg))
        .collect::<Result<_>>()?;

    let finals: Vec<f64> = runs
        .iter()
        .map(|r| r.trace.last().map_or(f64::NEG_INFINITY, |x| x.f_n))
        .collect();
    let mut best = 0;
    for (i, &f) in finals.iter().enumerate() {
        if f > finals[best] {
            best = i;
        }
    }
    let restarts = runs
        .iter()
        .zip(&finals)
        .enumerate()
        .map(|(index, (r, &f_star))| RestartSummary {
            index,
            f_star,
            iterations: r.trace.len(),
            converged: r.converged,
        })
        .collect();

    let SingleRun { trace, converged } = runs.into_iter().nth(best).expect("restarts >= 1");
    let last = trace.last().expect("max_iters >= 1");
    Ok(OptimizationResult {
        f_star: last.f_n,
        psi_star: last.psi_n.clone(),
        warnings: summarize_warnings(&trace, converged, cfg.max_iters),
        trace,
        converged,
        best_restart: best,
        restarts,
    })
}
