//! Run configuration: defaults, then an optional JSON file, then flags.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sumdiff::channels::{GadParams, TwoQubitAdParams};

use crate::error::{CliError, CliResult};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Overrides [`DEFAULT_TOLERANCE`]; a config file or flag still wins.
pub const TOLERANCE_ENV: &str = "SUMDIFF_TOLERANCE";
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_STEPS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Gad,
    Ad2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionChoice {
    DiagPairs,
    SplitRealImag,
    FullSpectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn times(&self) -> Vec<f64> {
        let span = self.t_max - self.t_min;
        (0..self.steps)
            .map(|i| self.t_min + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// Fully resolved configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub channel: ChannelKind,
    pub gad: Option<GadParams>,
    pub ad2: Option<TwoQubitAdParams>,
    pub partition: PartitionChoice,
    pub tolerance: f64,
    pub seed: u64,
    pub cleanup: bool,
    pub sweep: Option<SweepSpec>,
}

/// Every key optional; anything given overrides the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub channel: Option<ChannelKind>,
    pub gad: Option<GadFile>,
    pub ad2: Option<Ad2File>,
    pub partition: Option<PartitionChoice>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub cleanup: Option<bool>,
    pub sweep: Option<SweepFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadFile {
    pub p: Option<f64>,
    pub lam: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ad2File {
    pub gamma: Option<f64>,
    pub gamma12: Option<f64>,
    pub omega12: Option<f64>,
    pub omega0: Option<f64>,
    pub t: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Overlays `other` on `self`, field by field.
    pub fn merge(self, other: ConfigFile) -> ConfigFile {
        fn pick<T>(a: Option<T>, b: Option<T>) -> Option<T> {
            b.or(a)
        }
        let gad = match (self.gad, other.gad) {
            (Some(a), Some(b)) => Some(GadFile {
                p: pick(a.p, b.p),
                lam: pick(a.lam, b.lam),
            }),
            (a, b) => pick(a, b),
        };
        let ad2 = match (self.ad2, other.ad2) {
            (Some(a), Some(b)) => Some(Ad2File {
                gamma: pick(a.gamma, b.gamma),
                gamma12: pick(a.gamma12, b.gamma12),
                omega12: pick(a.omega12, b.omega12),
                omega0: pick(a.omega0, b.omega0),
                t: pick(a.t, b.t),
            }),
            (a, b) => pick(a, b),
        };
        let sweep = match (self.sweep, other.sweep) {
            (Some(a), Some(b)) => Some(SweepFile {
                t_min: pick(a.t_min, b.t_min),
                t_max: pick(a.t_max, b.t_max),
                steps: pick(a.steps, b.steps),
            }),
            (a, b) => pick(a, b),
        };
        ConfigFile {
            channel: pick(self.channel, other.channel),
            gad,
            ad2,
            partition: pick(self.partition, other.partition),
            tolerance: pick(self.tolerance, other.tolerance),
            seed: pick(self.seed, other.seed),
            cleanup: pick(self.cleanup, other.cleanup),
            sweep,
        }
    }

    /// Applies defaults and validates. `want_sweep` requires a sweep section.
    pub fn resolve(self, want_sweep: bool) -> CliResult<RunConfig> {
        let channel = self
            .channel
            .ok_or_else(|| CliError::Usage("no channel given (--channel gad|ad2)".into()))?;
        let tolerance = match self.tolerance {
            Some(t) => t,
            None => env_tolerance()?,
        };
        if !tolerance.is_finite() || tolerance <= 0.0 {
            return Err(CliError::Usage(format!("tolerance {tolerance} must be positive")));
        }
        let missing = |name: &str| CliError::Usage(format!("missing parameter --{name}"));
        let (gad, ad2) = match channel {
            ChannelKind::Gad => {
                if self.ad2.is_some() {
                    return Err(CliError::Usage("two-qubit parameters given for the gad channel".into()));
                }
                let g = self.gad.unwrap_or_default();
                let params = GadParams::new(g.p.ok_or_else(|| missing("p"))?, g.lam.ok_or_else(|| missing("lam"))?)?;
                (Some(params), None)
            }
            ChannelKind::Ad2 => {
                if self.gad.is_some() {
                    return Err(CliError::Usage("gad parameters given for the ad2 channel".into()));
                }
                let a = self.ad2.unwrap_or_default();
                let t = if want_sweep { 0.0 } else { a.t.unwrap_or(0.0) };
                let params = TwoQubitAdParams::new(
                    a.gamma.ok_or_else(|| missing("gamma"))?,
                    a.gamma12.unwrap_or(0.0),
                    a.omega12.unwrap_or(0.0),
                    a.omega0.unwrap_or(0.0),
                    t,
                )?;
                (None, Some(params))
            }
        };
        let sweep = if want_sweep {
            if channel != ChannelKind::Ad2 {
                return Err(CliError::Usage("sweeps need the time-dependent ad2 channel".into()));
            }
            let s = self.sweep.unwrap_or_default();
            let spec = SweepSpec {
                t_min: s.t_min.unwrap_or(0.0),
                t_max: s.t_max.ok_or_else(|| missing("t-max"))?,
                steps: s.steps.unwrap_or(DEFAULT_STEPS),
            };
            if !(spec.t_min >= 0.0 && spec.t_min < spec.t_max && spec.t_max.is_finite()) {
                return Err(CliError::Usage(format!(
                    "need 0 <= t_min < t_max, got {} and {}",
                    spec.t_min, spec.t_max
                )));
            }
            if spec.steps < 2 {
                return Err(CliError::Usage(format!("steps = {} must be at least 2", spec.steps)));
            }
            Some(spec)
        } else {
            None
        };
        Ok(RunConfig {
            channel,
            gad,
            ad2,
            partition: self.partition.unwrap_or(PartitionChoice::DiagPairs),
            tolerance,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            cleanup: self.cleanup.unwrap_or(false),
            sweep,
        })
    }
}

fn env_tolerance() -> CliResult<f64> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{TOLERANCE_ENV}={v} is not a number"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}
