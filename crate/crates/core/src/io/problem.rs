//! TOML problem files.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays of
//! rows. A minimal file:
//!
//! ```toml
//! dim = 2
//! generator = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]]
//!
//! [channel]
//! preset = "identity"
//! ```

use serde::{Deserialize, Serialize};

use crate::algebra::{c, unitary_from_hermitian, ComplexMatrix, ComplexVector, Tolerances};
use crate::channel::{DerivativeChannel, QuantumChannel, DEFAULT_FD_DELTA};
use crate::error::{Error, Result};
use crate::operators::{HermitianOperator, PureState};
use crate::optimizer::{InitMode, OptimizerConfig};
use crate::oracles::GaussianPrior;
use crate::povm::Povm;
use crate::validate::Validate;

pub type ComplexSpec = [f64; 2];
pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

pub const DEFAULT_ORACLE_SAMPLES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dim: usize,
    pub generator: MatrixSpec,
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub povm: Option<PovmSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivative_channel: Option<DerivativeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default)]
    pub optimizer: OptimizerSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bayes: Option<BayesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixSpec>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub a: MatrixSpec,
    pub b: MatrixSpec,
}

/// One of: a rotation family around the channel (`family`), explicit
/// `rho -> sum A rho B^dag` terms, or a central difference of two channels.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeSpec {
    /// `rotate_after` (`e^{-i phi H} ch(.) e^{i phi H}`) or `rotate_before`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// `exact` or `finite_difference`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus_kraus: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_kraus: Option<Vec<MatrixSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub amplitudes: Vec<ComplexSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `random_haar`, `uniform_superposition` or `user_supplied` (uses `[state]`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_mode: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BayesSpec {
    pub delta_prior: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_halfwidth: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

/// Gaussian prior plus the parameter value it is centred on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesSetup {
    pub prior: GaussianPrior,
    pub reference_phi: f64,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dim: usize,
    pub generator: HermitianOperator,
    pub channel: QuantumChannel,
    pub povm: Option<Povm>,
    pub derivative: Option<DerivativeChannel>,
    pub state: Option<PureState>,
    pub optimizer: OptimizerConfig,
    pub tolerances: Tolerances,
    pub bayes: Option<BayesSetup>,
    pub oracle_samples: usize,
}

impl Problem {
    pub fn require_povm(&self) -> Result<&Povm> {
        self.povm.as_ref().ok_or(Error::MissingSection("povm"))
    }

    pub fn require_state(&self) -> Result<&PureState> {
        self.state.as_ref().ok_or(Error::MissingSection("state"))
    }

    pub fn require_derivative(&self) -> Result<&DerivativeChannel> {
        self.derivative
            .as_ref()
            .ok_or(Error::MissingSection("derivative_channel"))
    }

    pub fn require_bayes(&self) -> Result<&BayesSetup> {
        self.bayes.as_ref().ok_or(Error::MissingSection("bayes"))
    }
}

/// Parse and validate a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let file: ProblemFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.resolve()?;
    Ok(file)
}

pub fn matrix_to_spec(m: &ComplexMatrix) -> MatrixSpec {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn vector_to_spec(v: &ComplexVector) -> Vec<ComplexSpec> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn spec_to_matrix(name: &str, spec: &MatrixSpec, dim: usize) -> Result<ComplexMatrix> {
    if spec.len() != dim {
        return Err(Error::Config(format!(
            "`{name}` has {} rows, expected {dim}",
            spec.len()
        )));
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (i, row) in spec.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Config(format!(
                "`{name}` row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = c(z[0], z[1]);
        }
    }
    Ok(m)
}

fn spec_to_hermitian(
    name: &str,
    spec: &MatrixSpec,
    dim: usize,
    tol: &Tolerances,
) -> Result<HermitianOperator> {
    HermitianOperator::with_tolerance(spec_to_matrix(name, spec, dim)?, tol.herm)
        .map_err(|e| Error::Config(format!("`{name}`: {e}")))
}

fn spec_to_kraus(name: &str, list: &[MatrixSpec], dim: usize) -> Result<Vec<ComplexMatrix>> {
    list.iter()
        .enumerate()
        .map(|(k, m)| spec_to_matrix(&format!("{name}[{k}]"), m, dim))
        .collect()
}

fn checked_channel(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<QuantumChannel> {
    QuantumChannel::with_tolerances(kraus, tol)
}

fn reject_extra(preset: &str, given: &[(&str, bool)]) -> Result<()> {
    match given.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(Error::Config(format!(
            "parameter `{name}` does not apply to channel preset `{preset}`"
        ))),
        None => Ok(()),
    }
}

fn required(value: Option<f64>, name: &str, preset: &str) -> Result<f64> {
    value.ok_or_else(|| Error::Config(format!("channel preset `{preset}` needs `{name}`")))
}

impl ChannelSpec {
    fn resolve(&self, dim: usize, tol: &Tolerances) -> Result<QuantumChannel> {
        let preset =
            match (&self.preset, &self.kraus) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "exactly one channel form (`preset` or `kraus`) must be given, found both"
                            .into(),
                    ))
                }
                (None, None) => return Err(Error::Config(
                    "exactly one channel form (`preset` or `kraus`) must be given, found neither"
                        .into(),
                )),
                (None, Some(kraus)) => {
                    reject_extra(
                        "kraus",
                        &[
                            ("eta", self.eta.is_some()),
                            ("p", self.p.is_some()),
                            ("gamma", self.gamma.is_some()),
                            ("exponent", self.exponent.is_some()),
                        ],
                    )?;
                    return checked_channel(spec_to_kraus("channel.kraus", kraus, dim)?, tol);
                }
                (Some(p), None) => p.as_str(),
            };
        let eta = self.eta.is_some();
        let p = self.p.is_some();
        let gamma = self.gamma.is_some();
        let exponent = self.exponent.is_some();
        match preset {
            "identity" => {
                reject_extra(
                    preset,
                    &[
                        ("eta", eta),
                        ("p", p),
                        ("gamma", gamma),
                        ("exponent", exponent),
                    ],
                )?;
                Ok(QuantumChannel::identity(dim))
            }
            "unitary" => {
                reject_extra(preset, &[("eta", eta), ("p", p), ("gamma", gamma)])?;
                let spec = self.exponent.as_ref().ok_or_else(|| {
                    Error::Config("channel preset `unitary` needs `exponent`".into())
                })?;
                Ok(QuantumChannel::unitary(&spec_to_hermitian(
                    "channel.exponent",
                    spec,
                    dim,
                    tol,
                )?))
            }
            "dephasing" => {
                reject_extra(
                    preset,
                    &[("p", p), ("gamma", gamma), ("exponent", exponent)],
                )?;
                QuantumChannel::dephasing(dim, required(self.eta, "eta", preset)?)
            }
            "depolarizing" => {
                reject_extra(
                    preset,
                    &[("eta", eta), ("gamma", gamma), ("exponent", exponent)],
                )?;
                QuantumChannel::depolarizing(dim, required(self.p, "p", preset)?)
            }
            "amplitude_damping" => {
                reject_extra(preset, &[("eta", eta), ("p", p), ("exponent", exponent)])?;
                QuantumChannel::amplitude_damping(dim, required(self.gamma, "gamma", preset)?)
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

impl PovmSpec {
    fn resolve(&self, dim: usize, tol: &Tolerances) -> Result<Povm> {
        match (&self.preset, &self.elements) {
            (Some(_), Some(_)) | (None, None) => Err(Error::Config(
                "exactly one POVM form (`preset` or `elements`) must be given".into(),
            )),
            (Some(preset), None) => {
                if self.labels.is_some() {
                    return Err(Error::Config("POVM presets carry their own labels".into()));
                }
                match preset.as_str() {
                    "computational" => Ok(Povm::computational(dim)),
                    "sigma_x" | "sigma_y" if dim != 2 => Err(Error::Config(format!(
                        "POVM preset `{preset}` needs dim = 2, got {dim}"
                    ))),
                    "sigma_x" => Ok(Povm::sigma_x()),
                    "sigma_y" => Ok(Povm::sigma_y()),
                    other => Err(Error::UnknownPreset(other.to_string())),
                }
            }
            (None, Some(elements)) => {
                let ops = elements
                    .iter()
                    .enumerate()
                    .map(|(k, m)| spec_to_hermitian(&format!("povm.elements[{k}]"), m, dim, tol))
                    .collect::<Result<Vec<_>>>()?;
                let labels = self
                    .labels
                    .clone()
                    .unwrap_or_else(|| (0..ops.len()).map(|k| k.to_string()).collect());
                let povm = Povm::unchecked(ops, labels)?;
                let violations = povm.violations(tol);
                if !violations.is_empty() {
                    return Err(Error::Invalid {
                        what: "POVM",
                        violations,
                    });
                }
                Ok(povm)
            }
        }
    }
}

/// `phi -> U_phi K` or `phi -> K U_phi` for every Kraus operator `K`.
fn rotated_channel(
    ch: &QuantumChannel,
    h: &HermitianOperator,
    phi: f64,
    after: bool,
) -> Result<QuantumChannel> {
    let u = unitary_from_hermitian(h, phi);
    let kraus = ch
        .kraus()
        .iter()
        .map(|k| if after { &u * k } else { k * &u })
        .collect();
    QuantumChannel::unchecked(kraus)
}

impl DerivativeSpec {
    fn resolve(
        &self,
        dim: usize,
        ch: &QuantumChannel,
        h: &HermitianOperator,
        tol: &Tolerances,
    ) -> Result<DerivativeChannel> {
        let forms = [
            self.family.is_some(),
            self.terms.is_some(),
            self.plus_kraus.is_some(),
        ];
        if forms.iter().filter(|&&f| f).count() != 1 {
            return Err(Error::Config(
                "derivative_channel needs exactly one of `family`, `terms` or `plus_kraus`/`minus_kraus`".into(),
            ));
        }
        let delta = self.delta.unwrap_or(DEFAULT_FD_DELTA);
        if !(delta > 0.0) {
            return Err(Error::Config(format!(
                "derivative_channel.delta must be positive, got {delta}"
            )));
        }
        let dch = if let Some(family) = &self.family {
            let after = match family.as_str() {
                "rotate_after" => true,
                "rotate_before" => false,
                other => return Err(Error::UnknownPreset(other.to_string())),
            };
            match self.method.as_deref().unwrap_or("exact") {
                "exact" if after => DerivativeChannel::rotate_after(ch, h)?,
                "exact" => DerivativeChannel::rotate_before(ch, h)?,
                "finite_difference" => DerivativeChannel::from_family(
                    |phi| rotated_channel(ch, h, phi, after),
                    0.0,
                    delta,
                )?,
                other => return Err(Error::UnknownPreset(other.to_string())),
            }
        } else if let Some(terms) = &self.terms {
            if self.method.is_some() || self.delta.is_some() {
                return Err(Error::Config(
                    "explicit derivative terms take no `method` or `delta`".into(),
                ));
            }
            let pairs = terms
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    Ok((
                        spec_to_matrix(&format!("derivative_channel.terms[{k}].a"), &t.a, dim)?,
                        spec_to_matrix(&format!("derivative_channel.terms[{k}].b"), &t.b, dim)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            DerivativeChannel::new(dim, dim, pairs)?
        } else {
            if self.method.is_some() {
                return Err(Error::Config(
                    "`plus_kraus`/`minus_kraus` take no `method`".into(),
                ));
            }
            let minus = self.minus_kraus.as_ref().ok_or_else(|| {
                Error::Config("`plus_kraus` needs a matching `minus_kraus`".into())
            })?;
            let plus = self.plus_kraus.as_ref().expect("checked above");
            let plus = checked_channel(
                spec_to_kraus("derivative_channel.plus_kraus", plus, dim)?,
                tol,
            )?;
            let minus = checked_channel(
                spec_to_kraus("derivative_channel.minus_kraus", minus, dim)?,
                tol,
            )?;
            DerivativeChannel::finite_difference(&plus, &minus, delta)?
        };
        let violations = dch.violations(&loose_derivative_tolerances(tol, delta));
        if !violations.is_empty() {
            return Err(Error::Invalid {
                what: "derivative channel",
                violations,
            });
        }
        Ok(dch)
    }
}

/// Central differences divide rounding errors by `2 delta`.
fn loose_derivative_tolerances(tol: &Tolerances, delta: f64) -> Tolerances {
    let scale = (1.0 / delta).max(1.0);
    Tolerances {
        herm: tol.herm * scale,
        tp: tol.tp * scale,
        ..*tol
    }
}

impl OptimizerSpec {
    fn resolve(&self, state: Option<&PureState>) -> Result<OptimizerConfig> {
        let d = OptimizerConfig::default();
        let init_mode = match self.init_mode.as_deref() {
            None | Some("random_haar") => InitMode::RandomHaar,
            Some("uniform_superposition") => InitMode::UniformSuperposition,
            Some("user_supplied") => {
                InitMode::UserSupplied(state.cloned().ok_or(Error::MissingSection("state"))?)
            }
            Some(other) => return Err(Error::UnknownPreset(other.to_string())),
        };
        let cfg = OptimizerConfig {
            tol: self.tol.unwrap_or(d.tol),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            eps_rank: self.eps_rank.unwrap_or(d.eps_rank),
            eps_deg: self.eps_deg.unwrap_or(d.eps_deg),
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed.unwrap_or(d.seed),
            init_mode,
        };
        cfg.check()?;
        Ok(cfg)
    }
}

impl TolerancesSpec {
    fn resolve(&self) -> Result<Tolerances> {
        let d = Tolerances::default();
        let t = Tolerances {
            herm: self.herm.unwrap_or(d.herm),
            psd: self.psd.unwrap_or(d.psd),
            tp: self.tp.unwrap_or(d.tp),
            trace: self.trace.unwrap_or(d.trace),
            norm: self.norm.unwrap_or(d.norm),
        };
        if [t.herm, t.psd, t.tp, t.trace, t.norm]
            .iter()
            .any(|&x| !(x >= 0.0))
        {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        Ok(t)
    }
}

impl ProblemFile {
    /// Build the validated in-memory problem.
    pub fn resolve(&self) -> Result<Problem> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::Config("dim must be at least 1".into()));
        }
        let tolerances = self.tolerances.clone().unwrap_or_default().resolve()?;
        let generator = spec_to_hermitian("generator", &self.generator, dim, &tolerances)?;
        let channel = self.channel.resolve(dim, &tolerances)?;
        let povm = self
            .povm
            .as_ref()
            .map(|p| p.resolve(dim, &tolerances))
            .transpose()?;
        let derivative = self
            .derivative_channel
            .as_ref()
            .map(|d| d.resolve(dim, &channel, &generator, &tolerances))
            .transpose()?;
        let state = self
            .state
            .as_ref()
            .map(|s| {
                if s.amplitudes.len() != dim {
                    return Err(Error::Config(format!(
                        "state has {} amplitudes, expected {dim}",
                        s.amplitudes.len()
                    )));
                }
                let v =
                    ComplexVector::from_iterator(dim, s.amplitudes.iter().map(|z| c(z[0], z[1])));
                let norm = v.norm();
                if (norm - 1.0).abs() > tolerances.norm {
                    return Err(Error::NotNormalised { norm });
                }
                PureState::normalised(v)
            })
            .transpose()?;
        let optimizer = self.optimizer.resolve(state.as_ref())?;
        let bayes = self
            .bayes
            .as_ref()
            .map(|b| -> Result<BayesSetup> {
                Ok(BayesSetup {
                    prior: GaussianPrior::with_grid(
                        b.delta_prior,
                        b.grid_halfwidth.unwrap_or(6.0),
                        b.grid_points.unwrap_or(201),
                    )?,
                    reference_phi: b.reference_phi.unwrap_or(0.0),
                })
            })
            .transpose()?;
        let oracle_samples = self
            .oracle
            .as_ref()
            .and_then(|o| o.samples)
            .unwrap_or(DEFAULT_ORACLE_SAMPLES);
        if oracle_samples == 0 {
            return Err(Error::Config("oracle.samples must be at least 1".into()));
        }
        Ok(Problem {
            dim,
            generator,
            channel,
            povm,
            derivative,
            state,
            optimizer,
            tolerances,
            bayes,
            oracle_samples,
        })
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        let opt = &mut self.optimizer;
        opt.seed = o.seed.or(opt.seed);
        opt.restarts = o.restarts.or(opt.restarts);
        opt.tol = o.tol.or(opt.tol);
        opt.max_iters = o.max_iters.or(opt.max_iters);
    }

    /// Copy with every optimizer and tolerance default written out.
    pub fn with_defaults(&self) -> ProblemFile {
        let mut out = self.clone();
        let d = OptimizerConfig::default();
        let o = &mut out.optimizer;
        o.tol.get_or_insert(d.tol);
        o.max_iters.get_or_insert(d.max_iters);
        o.eps_rank.get_or_insert(d.eps_rank);
        o.eps_deg.get_or_insert(d.eps_deg);
        o.restarts.get_or_insert(d.restarts);
        o.seed.get_or_insert(d.seed);
        o.init_mode
            .get_or_insert_with(|| d.init_mode.name().to_string());
        let t = out.tolerances.get_or_insert_with(TolerancesSpec::default);
        let dt = Tolerances::default();
        t.herm.get_or_insert(dt.herm);
        t.psd.get_or_insert(dt.psd);
        t.tp.get_or_insert(dt.tp);
        t.trace.get_or_insert(dt.trace);
        t.norm.get_or_insert(dt.norm);
        out
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}
