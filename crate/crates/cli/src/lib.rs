//! Experiment runner for noise-guessing purification.
//!
//! Every command writes deterministic CSV files into the output directory, each
//! prefixed by `#` comment lines carrying the tool version, a SHA-256 hash of the
//! resolved parameters and the parameters themselves, plus a
//! `<command>.manifest.json` describing the run.

pub mod compare;
pub mod figures;
pub mod lut;
pub mod output;
pub mod params;
pub mod simulate;
pub mod tables;

use clap::{Parser, Subcommand};

pub use output::{Outcome, Run};
pub use params::Params;

#[derive(Debug, Parser)]
#[command(name = "pgrand", version, about = "Noise-guessing entanglement purification: decoders, Monte Carlo and analytic sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Build (or resume) a syndrome lookup table for one random encoder
    BuildLut,
    /// Monte Carlo estimate of the error probability over random encoders
    Simulate,
    /// Closed-form figure data (--fig 2,3,4,5,6,7,8,12,13)
    Analytic,
    /// Smallest ensemble for the hashing protocol to purify each --f
    Hashing,
    /// Effective-yield comparisons with recurrence protocols (--fig 9,11,14)
    Compare,
    /// Measurement-based purification ranges and resource-noise thresholds
    MbRange,
    /// Reproduce tables 1-6 (--which)
    Tables,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::BuildLut => "build-lut",
            Command::Simulate => "simulate",
            Command::Analytic => "analytic",
            Command::Hashing => "hashing",
            Command::Compare => "compare",
            Command::MbRange => "mb-range",
            Command::Tables => "tables",
        }
    }
}

/// Resolves the config file, sizes the worker pool and runs the command.
pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let file = match &cli.params.config {
        Some(path) => Params::from_toml_file(path)?,
        None => Params::default(),
    };
    let params = cli.params.overlay(file)?;
    let workers = params.workers.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    pool.install(|| match cli.command {
        Command::BuildLut => lut::build_lut(&params),
        Command::Simulate => simulate::simulate(&params),
        Command::Analytic => figures::analytic(&params),
        Command::Hashing => compare::hashing(&params),
        Command::Compare => compare::compare(&params),
        Command::MbRange => compare::mb_range(&params),
        Command::Tables => tables::tables(&params),
    })
}

/// Parses `args` (including the program name) and runs.
pub fn run_args<I, T>(args: I) -> anyhow::Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(Cli::try_parse_from(args)?)
}
