//! Run reports: pretty JSON on stdout, optional CSV trace.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::io::problem::{vector_to_spec, ComplexSpec, MatrixSpec, ProblemFile};
use crate::operators::PureState;
use crate::optimizer::{IterationRecord, OptimizationResult, RestartSummary};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub f_n: f64,
    pub degenerate: bool,
    pub rank_deficit: usize,
    pub irreducible: bool,
}

impl From<&IterationRecord> for TraceRow {
    fn from(r: &IterationRecord) -> Self {
        TraceRow {
            n: r.n,
            f_n: r.f_n,
            degenerate: r.degenerate_step,
            rank_deficit: r.sld_rank_deficit,
            irreducible: r.irreducible,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    pub f_star: f64,
    pub psi_star: Vec<ComplexSpec>,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: Vec<String>,
    pub trace: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub restarts: Vec<RestartSummary>,
    /// Command-specific scalars.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    /// Command-specific operators.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, MatrixSpec>,
    pub config_echo: ProblemFile,
}

impl RunReport {
    /// Report for a one-shot evaluation (no iterations).
    pub fn evaluation(command: &str, value: f64, psi: &PureState, config: &ProblemFile) -> Self {
        RunReport {
            command: command.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            f_star: value,
            psi_star: vector_to_spec(psi.amplitudes()),
            iterations: 0,
            converged: true,
            warnings: Vec::new(),
            trace: Vec::new(),
            restarts: Vec::new(),
            values: BTreeMap::new(),
            operators: BTreeMap::new(),
            config_echo: config.clone(),
        }
    }

    pub fn from_optimization(
        command: &str,
        res: &OptimizationResult,
        config: &ProblemFile,
    ) -> Self {
        RunReport {
            iterations: res.iterations(),
            converged: res.converged,
            warnings: res.warnings.clone(),
            trace: res.trace.iter().map(TraceRow::from).collect(),
            restarts: res.restarts.clone(),
            ..Self::evaluation(command, res.f_star, &res.psi_star, config)
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn write_trace_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "n,f_n,degenerate,rank_deficit,irreducible")?;
        for r in &self.trace {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.n, r.f_n, r.degenerate, r.rank_deficit, r.irreducible
            )?;
        }
        Ok(())
    }

    pub fn save_trace_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_trace_csv(&mut f)?;
        f.flush()?;
        Ok(())
    }
}
