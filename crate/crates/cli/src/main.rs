use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use sumdiff_cli::commands::{cmd_extract, cmd_sweep, cmd_verify, write_sweep_csv, Oracle};
use sumdiff_cli::config::{Ad2File, ChannelKind, ConfigFile, GadFile, PartitionChoice, SweepFile};
use sumdiff_cli::export::KrausExport;
use sumdiff_cli::{CliError, CliResult};

/// Signed Kraus operators from Hermitian partitions of Choi matrices.
///
/// Exit codes: 0 pass, 1 usage error, 2 verification failure, 3 I/O error.
#[derive(Parser)]
#[command(name = "sumdiff", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Choi matrix, partition it, extract signed operators and export them.
    Extract(ExtractArgs),
    /// Replay an export on seeded random states and compare with an oracle.
    Verify(VerifyArgs),
    /// Tabulate coefficients and diagnostics of the ad2 channel over time as CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ChannelArgs {
    /// JSON config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    channel: Option<ChannelKind>,
    /// GAD mixing probability.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// GAD damping strength.
    #[arg(long, allow_hyphen_values = true)]
    lam: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma12: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega12: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    partition: Option<PartitionChoice>,
    /// Residual tolerance (default 1e-10, or the SUMDIFF_TOLERANCE environment variable).
    #[arg(long, allow_hyphen_values = true)]
    tolerance: Option<f64>,
    /// Seed for the random states used by `verify`.
    #[arg(long)]
    seed: Option<u64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    common: ChannelArgs,
    /// Evaluation time for ad2.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Rebuild the Choi matrix from the extracted set and re-extract it spectrally.
    #[arg(long)]
    cleanup: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Export written by `extract`.
    export: PathBuf,
    #[arg(long, value_enum, default_value = "direct-action")]
    against: Oracle,
    /// Overrides the seed stored in the export.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random density matrices.
    #[arg(long, default_value_t = 100)]
    states: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: ChannelArgs,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

impl ChannelArgs {
    fn overrides(&self, t: Option<f64>, cleanup: bool, sweep: Option<SweepFile>) -> ConfigFile {
        let gad = (self.p.is_some() || self.lam.is_some()).then_some(GadFile { p: self.p, lam: self.lam });
        let any_ad2 = [self.gamma, self.gamma12, self.omega12, self.omega0, t].iter().any(Option::is_some);
        let ad2 = any_ad2.then_some(Ad2File {
            gamma: self.gamma,
            gamma12: self.gamma12,
            omega12: self.omega12,
            omega0: self.omega0,
            t,
        });
        ConfigFile {
            channel: self.channel,
            gad,
            ad2,
            partition: self.partition,
            tolerance: self.tolerance,
            seed: self.seed,
            cleanup: cleanup.then_some(true),
            sweep,
        }
    }

    fn resolve(&self, flags: ConfigFile, want_sweep: bool) -> CliResult<sumdiff_cli::config::RunConfig> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        base.merge(flags).resolve(want_sweep)
    }
}

fn emit(out: &Option<PathBuf>, text: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(text)?;
            Ok(())
        }
    }
}

fn verdict(passed: bool, what: &str) -> CliResult<()> {
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{what} exceeded the tolerance")))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Extract(args) => {
            let flags = args.common.overrides(args.t, args.cleanup, None);
            let cfg = args.common.resolve(flags, false)?;
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let outcome = cmd_extract(&cfg, now)?;
            let mut text = outcome.export.to_json();
            text.push('\n');
            emit(&args.common.out, text.as_bytes())?;
            let r = &outcome.export.residuals;
            eprintln!(
                "{} positive, {} negative operators; completeness {:.3e}, reconstruction {:.3e} (tolerance {:.1e})",
                outcome.export.positive.len(),
                outcome.export.negative.len(),
                r.completeness,
                r.reconstruction,
                cfg.tolerance
            );
            verdict(outcome.passed, "extraction residual")
        }
        Command::Verify(args) => {
            let export = KrausExport::load(&args.export)?;
            let v = cmd_verify(&export, args.against, args.seed, args.states)?;
            println!(
                "{}: max deviation {:.3e}, completeness {:.3e} over {} states (tolerance {:.1e})",
                if v.passed { "PASS" } else { "FAIL" },
                v.max_deviation,
                v.completeness,
                v.states,
                v.tolerance
            );
            verdict(v.passed, "deviation")
        }
        Command::Sweep(args) => {
            let sweep = SweepFile {
                t_min: args.t_min,
                t_max: args.t_max,
                steps: args.steps,
            };
            let flags = args.common.overrides(None, false, Some(sweep));
            let cfg = args.common.resolve(flags, true)?;
            let outcome = cmd_sweep(&cfg)?;
            let mut buf = Vec::new();
            write_sweep_csv(&outcome.rows, &mut buf)?;
            emit(&args.common.out, &buf)?;
            verdict(outcome.passed, "sweep residual")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
