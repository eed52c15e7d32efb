//! JSON export of an extracted signed Kraus set.
//!
//! Complex entries are `[re, im]` pairs. serde_json prints the shortest
//! decimal that parses back to the same `f64`, so a save/load cycle is exact.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sumdiff::analysis::ChannelReport;
use sumdiff::channels::{GadParams, SignedKrausSet, TwoQubitAdParams};
use sumdiff::choi::{LabeledOperator, Sign};
use sumdiff::linalg::{c64, ComplexMatrix};

use crate::config::{ChannelKind, PartitionChoice, RunConfig};
use crate::error::{CliError, CliResult};

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub channel: ChannelKind,
    pub gad: Option<GadParams>,
    pub ad2: Option<TwoQubitAdParams>,
    pub partition: PartitionChoice,
    pub cleanup: bool,
    pub tolerance: f64,
    pub seed: u64,
    /// Seconds since the Unix epoch; the only field that varies between runs.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedOperator {
    pub label: String,
    pub weight: f64,
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub completeness: f64,
    pub reconstruction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFields {
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
    pub is_trace_preserving: bool,
    pub completeness_residual: f64,
    pub ppt_of_choi: bool,
    pub min_partial_transpose_eigenvalue: f64,
    pub separable_certified: bool,
    pub point_channel: Option<MatrixRows>,
}

impl From<&ChannelReport> for ReportFields {
    fn from(r: &ChannelReport) -> Self {
        Self {
            is_cp: r.is_cp,
            min_choi_eigenvalue: r.min_choi_eigenvalue,
            is_trace_preserving: r.is_trace_preserving,
            completeness_residual: r.completeness_residual,
            ppt_of_choi: r.ppt_of_choi,
            min_partial_transpose_eigenvalue: r.min_partial_transpose_eigenvalue,
            separable_certified: r.separable_certified,
            point_channel: r.point_channel.as_ref().map(|s| to_rows(s.mat())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausExport {
    pub metadata: Metadata,
    pub sys_dim: usize,
    pub positive: Vec<ExportedOperator>,
    pub negative: Vec<ExportedOperator>,
    pub residuals: Residuals,
    pub report: ReportFields,
}

pub fn to_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn from_rows(rows: &MatrixRows, dim: usize) -> CliResult<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Io(format!("operator is not {dim}x{dim}")));
    }
    Ok(ComplexMatrix::from_fn(dim, |r, c| c64(rows[r][c][0], rows[r][c][1])))
}

impl KrausExport {
    pub fn new(
        cfg: &RunConfig,
        ops: &[LabeledOperator],
        sys_dim: usize,
        residuals: Residuals,
        report: &ChannelReport,
        timestamp: u64,
    ) -> Self {
        let pick = |s: Sign| {
            ops.iter()
                .filter(|o| o.sign == s)
                .map(|o| ExportedOperator {
                    label: o.label.clone(),
                    weight: o.weight,
                    matrix: to_rows(&o.op),
                })
                .collect()
        };
        Self {
            metadata: Metadata {
                channel: cfg.channel,
                gad: cfg.gad,
                ad2: cfg.ad2,
                partition: cfg.partition,
                cleanup: cfg.cleanup,
                tolerance: cfg.tolerance,
                seed: cfg.seed,
                timestamp,
            },
            sys_dim,
            positive: pick(Sign::Positive),
            negative: pick(Sign::Negative),
            residuals,
            report: report.into(),
        }
    }

    pub fn kraus_set(&self) -> CliResult<SignedKrausSet> {
        let d = self.sys_dim;
        let conv = |v: &[ExportedOperator]| -> CliResult<Vec<ComplexMatrix>> {
            v.iter().map(|o| from_rows(&o.matrix, d)).collect()
        };
        SignedKrausSet::new(d, conv(&self.positive)?, conv(&self.negative)?)
            .map_err(|e| CliError::Io(format!("malformed export: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("export is plain data")
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Io(format!("malformed export: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
