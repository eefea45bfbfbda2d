//! Thin command-line front end over the `comb_sense` library.
//!
//! Loads one JSON configuration, applies the command-line overrides, runs
//! the requested command, and writes the artifacts plus a `manifest.json`
//! into the output directory. All physics lives in the library — see the
//! `examples/` directory for the scriptable API.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use comb_sense::config::RunConfig;
use comb_sense::error::Error;
use comb_sense::run::{
    cmd_advantage_cut, cmd_nbar, cmd_oracle, cmd_qfi_map, cmd_reconstruct, cmd_reproduce_fig2,
    cmd_reproduce_fig3, unix_timestamp, write_manifest, RunContext,
};

#[derive(Parser)]
#[command(
    name = "comb-sense",
    version,
    about = "two-tooth quantum-comb thermometry: envelopes, Fisher maps, spectra",
    propagate_version = true
)]
struct Cli {
    /// JSON configuration file; omitted = built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the Monte Carlo seed from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Rayon worker threads (default: all cores; env: COMB_SENSE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the envelope regime from the configuration.
    #[arg(long, global = true, value_enum)]
    regime: Option<RegimeArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Weak,
    Exact,
}

impl From<RegimeArg> for comb_sense::coherence::Regime {
    fn from(value: RegimeArg) -> Self {
        match value {
            RegimeArg::Weak => Self::Weak,
            RegimeArg::Exact => Self::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Thermal occupation, responsivity, and variance over temperature.
    Nbar,
    /// Fisher-information and memory-efficiency map over (T, Δ).
    QfiMap,
    /// Efficiency cuts A(Δ) at the configured temperatures.
    AdvantageCut,
    /// Recover the correlation kernel and noise spectrum from a sweep.
    Reconstruct {
        /// Visibility sweep CSV (expects a .meta.json sidecar).
        #[arg(long)]
        input: PathBuf,
        /// Measured probe-only visibility CSV for calibration; without it a
        /// probe-contaminated sweep is debiased from its metadata rate.
        #[arg(long)]
        probe_reference: Option<PathBuf>,
    },
    /// Validate analytic envelopes against the stochastic oracle.
    Oracle,
    /// Regenerate a canonical dataset end to end.
    Reproduce {
        #[arg(value_enum)]
        target: ReproduceTarget,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReproduceTarget {
    /// Efficiency map, minimum locus, and fixed-temperature cuts.
    Fig2,
    /// Kernel-family visibilities and reconstructed spectra.
    Fig3,
}

fn command_name(command: &Command) -> String {
    match command {
        Command::Nbar => "nbar".into(),
        Command::QfiMap => "qfi-map".into(),
        Command::AdvantageCut => "advantage-cut".into(),
        Command::Reconstruct { .. } => "reconstruct".into(),
        Command::Oracle => "oracle".into(),
        Command::Reproduce { target: ReproduceTarget::Fig2 } => "reproduce fig2".into(),
        Command::Reproduce { target: ReproduceTarget::Fig3 } => "reproduce fig3".into(),
    }
}

fn thread_count(cli_threads: Option<usize>) -> Result<Option<usize>, Error> {
    if cli_threads.is_some() {
        return Ok(cli_threads);
    }
    match std::env::var("COMB_SENSE_THREADS") {
        Ok(raw) => raw
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::Config(format!("COMB_SENSE_THREADS must be a number, got '{raw}'"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::State(format!("could not size the thread pool: {e}")))?;
    }

    let (mut config, config_dir) = match &cli.config {
        Some(path) => {
            let dir = path.parent().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            (RunConfig::load(path)?, dir)
        }
        None => (RunConfig::default(), PathBuf::from(".")),
    };
    if let Some(seed) = cli.seed {
        config.oracle.seed = seed;
    }
    if let Some(regime) = cli.regime {
        config.regime = regime.into();
    }

    let ctx = RunContext::new(config, cli.out.clone(), config_dir)?;
    let started = unix_timestamp();
    let name = command_name(&cli.command);

    let (files, oracle_failures) = match &cli.command {
        Command::Nbar => (cmd_nbar(&ctx)?, 0),
        Command::QfiMap => (cmd_qfi_map(&ctx)?, 0),
        Command::AdvantageCut => (cmd_advantage_cut(&ctx)?, 0),
        Command::Reconstruct { input, probe_reference } => {
            (cmd_reconstruct(&ctx, input, probe_reference.as_deref())?, 0)
        }
        Command::Oracle => cmd_oracle(&ctx)?,
        Command::Reproduce { target: ReproduceTarget::Fig2 } => (cmd_reproduce_fig2(&ctx)?, 0),
        Command::Reproduce { target: ReproduceTarget::Fig3 } => (cmd_reproduce_fig3(&ctx)?, 0),
    };

    let manifest = write_manifest(&ctx, &name, started, &files)?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    println!("wrote {}", manifest.display());

    if oracle_failures > 0 {
        return Err(Error::State(format!(
            "{oracle_failures} oracle validation point(s) failed the 3-sigma gate"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
