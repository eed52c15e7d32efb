use std::io::Write;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use sumdiff::analysis::{eb_report, mdc_kraus, min_partial_transpose_eigenvalue, pdc_concurrence_at, pdc_kraus};
use sumdiff::channels::{ad2_apply_matrix, ad2_coefficients, gad_kraus, SignedKrausSet};
use sumdiff::choi::{
    choi_2ad, choi_from_channel, extract_labeled, partition, partition_2ad, reconstruct_choi, standard_kraus_from_choi,
    Ad2Layout, ChoiMatrix, HermitianPartition, PartitionStrategy,
};
use sumdiff::linalg::ComplexMatrix;
use sumdiff::random::{random_density, rng_from_seed};

use crate::config::{ChannelKind, PartitionChoice, RunConfig};
use crate::export::{KrausExport, Metadata, Residuals};
use crate::error::{CliError, CliResult};

type Action = Box<dyn Fn(&ComplexMatrix) -> sumdiff::Result<ComplexMatrix> + Sync>;

/// The channel's own action, built from the parameters alone.
fn direct_action(meta: &Metadata) -> CliResult<Action> {
    match meta.channel {
        ChannelKind::Gad => {
            let params = meta.gad.ok_or_else(|| CliError::Io("export lacks gad parameters".into()))?;
            params.validate()?;
            let ks = gad_kraus(&params);
            Ok(Box::new(move |x| ks.apply(x)))
        }
        ChannelKind::Ad2 => {
            let params = meta.ad2.ok_or_else(|| CliError::Io("export lacks ad2 parameters".into()))?;
            let c = ad2_coefficients(&params)?;
            Ok(Box::new(move |x| ad2_apply_matrix(x, &c)))
        }
    }
}

fn channel_choi(meta: &Metadata) -> CliResult<ChoiMatrix> {
    match meta.channel {
        ChannelKind::Gad => {
            let ks = gad_kraus(&meta.gad.ok_or_else(|| CliError::Io("export lacks gad parameters".into()))?);
            Ok(choi_from_channel(|x| ks.apply(x), 2)?)
        }
        ChannelKind::Ad2 => {
            let params = meta.ad2.ok_or_else(|| CliError::Io("export lacks ad2 parameters".into()))?;
            Ok(choi_2ad(&ad2_coefficients(&params)?))
        }
    }
}

fn channel_partition(cfg: &RunConfig, b: &ChoiMatrix) -> CliResult<HermitianPartition> {
    let p = match (cfg.channel, cfg.partition) {
        (_, PartitionChoice::FullSpectral) => partition(b, &PartitionStrategy::FullSpectral)?,
        (ChannelKind::Gad, PartitionChoice::DiagPairs) => partition(b, &PartitionStrategy::DiagPlusPairs)?,
        (ChannelKind::Gad, PartitionChoice::SplitRealImag) => partition(b, &PartitionStrategy::SplitRealImag)?,
        (ChannelKind::Ad2, choice) => {
            let layout = if choice == PartitionChoice::SplitRealImag {
                Ad2Layout::Symbols
            } else {
                Ad2Layout::Positions
            };
            let params = cfg.ad2.expect("resolved ad2 config");
            partition_2ad(&ad2_coefficients(&params)?, layout)
        }
    };
    Ok(p)
}

pub struct ExtractOutcome {
    pub export: KrausExport,
    pub passed: bool,
}

/// Choi matrix, partition, extraction, residuals and channel report.
pub fn cmd_extract(cfg: &RunConfig, timestamp: u64) -> CliResult<ExtractOutcome> {
    let meta = Metadata {
        channel: cfg.channel,
        gad: cfg.gad,
        ad2: cfg.ad2,
        partition: cfg.partition,
        cleanup: cfg.cleanup,
        tolerance: cfg.tolerance,
        seed: cfg.seed,
        timestamp,
    };
    let b = channel_choi(&meta)?;
    let mut ex = extract_labeled(&channel_partition(cfg, &b)?)?;
    if cfg.cleanup {
        let rebuilt = reconstruct_choi(&ex.kraus_set());
        ex = extract_labeled(&partition(&rebuilt, &PartitionStrategy::FullSpectral)?)?;
    }
    let ks = ex.kraus_set();
    let residuals = Residuals {
        completeness: ks.completeness_residual(),
        reconstruction: reconstruct_choi(&ks).mat().max_abs_diff(b.mat()),
    };
    let passed = residuals.completeness <= cfg.tolerance && residuals.reconstruction <= cfg.tolerance;
    let report = eb_report(&b, cfg.tolerance)?;
    let export = KrausExport::new(cfg, &ex.operators, b.sys_dim(), residuals, &report, timestamp);
    Ok(ExtractOutcome { export, passed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    /// The channel's defining action.
    DirectAction,
    /// Conventional Kraus operators from one eigendecomposition of the Choi matrix.
    StandardKraus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub max_deviation: f64,
    pub completeness: f64,
    pub tolerance: f64,
    pub states: usize,
    pub passed: bool,
}

/// Replays the stored operators on seeded random states against an oracle.
pub fn cmd_verify(export: &KrausExport, oracle: Oracle, seed: Option<u64>, states: usize) -> CliResult<VerifyOutcome> {
    let ks = export.kraus_set()?;
    let meta = &export.metadata;
    let reference: Action = match oracle {
        Oracle::DirectAction => direct_action(meta)?,
        Oracle::StandardKraus => {
            let std_ks = standard_kraus_from_choi(&channel_choi(meta)?)?;
            Box::new(move |x| std_ks.apply(x))
        }
    };
    if ks.dim() != channel_choi(meta)?.sys_dim() {
        return Err(CliError::Io(format!("export dimension {} does not match the channel", ks.dim())));
    }
    let mut rng = rng_from_seed(seed.unwrap_or(meta.seed));
    let mut worst: f64 = 0.0;
    for _ in 0..states {
        let rho = random_density(&mut rng, ks.dim());
        let got = ks.apply(rho.mat())?;
        worst = worst.max(got.max_abs_diff(&reference(rho.mat())?));
    }
    let completeness = ks.completeness_residual();
    Ok(VerifyOutcome {
        max_deviation: worst,
        completeness,
        tolerance: meta.tolerance,
        states,
        passed: worst <= meta.tolerance && completeness <= meta.tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub abs_j: f64,
    pub abs_l: f64,
    pub abs_m: f64,
    pub abs_p: f64,
    pub abs_q: f64,
    pub abs_t: f64,
    pub abs_u: f64,
    pub abs_v: f64,
    pub abs_r: f64,
    pub abs_s: f64,
    pub completeness_residual: f64,
    pub reconstruction_residual: f64,
    pub min_choi_eigenvalue: f64,
    pub mdc_ppt: bool,
    pub pdc_ppt: bool,
    pub pdc_concurrence: f64,
}

fn sweep_row(cfg: &RunConfig, t: f64) -> CliResult<SweepRow> {
    let params = cfg.ad2.expect("resolved ad2 config").at_time(t)?;
    let c = ad2_coefficients(&params)?;
    let b = choi_2ad(&c);
    let point = RunConfig {
        ad2: Some(params),
        ..cfg.clone()
    };
    let ks = extract_labeled(&channel_partition(&point, &b)?)?.kraus_set();
    let ppt = |k: &SignedKrausSet| -> CliResult<bool> {
        Ok(min_partial_transpose_eigenvalue(reconstruct_choi(k).mat(), 4, 4)? >= -cfg.tolerance)
    };
    Ok(SweepRow {
        t,
        a: c.a,
        b: c.b,
        c: c.c,
        d: c.d,
        e: c.e,
        f: c.f,
        g: c.g,
        h: c.h,
        abs_j: c.j.norm(),
        abs_l: c.l.norm(),
        abs_m: c.m.norm(),
        abs_p: c.p.norm(),
        abs_q: c.q.norm(),
        abs_t: c.t.norm(),
        abs_u: c.u.norm(),
        abs_v: c.v.norm(),
        abs_r: c.r.norm(),
        abs_s: c.s.norm(),
        completeness_residual: ks.completeness_residual(),
        reconstruction_residual: reconstruct_choi(&ks).mat().max_abs_diff(b.mat()),
        min_choi_eigenvalue: b.min_eigenvalue()?,
        mdc_ppt: ppt(&mdc_kraus(&c))?,
        pdc_ppt: ppt(&pdc_kraus(&c)?)?,
        pdc_concurrence: pdc_concurrence_at(&params)?.concurrence,
    })
}

pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub passed: bool,
}

/// One row per time point, in ascending `t`. Fails verification when any
/// row's residuals exceed the tolerance.
pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<SweepOutcome> {
    let spec = cfg
        .sweep
        .ok_or_else(|| CliError::Usage("sweep range missing (--t-max)".into()))?;
    let rows: Vec<SweepRow> = spec
        .times()
        .into_par_iter()
        .map(|t| sweep_row(cfg, t))
        .collect::<CliResult<_>>()?;
    let passed = rows
        .iter()
        .all(|r| r.completeness_residual <= cfg.tolerance && r.reconstruction_residual <= cfg.tolerance);
    Ok(SweepOutcome { rows, passed })
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
