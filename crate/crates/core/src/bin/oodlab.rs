//! Command-line front end: `check`, `curve`, `counterexample`, `verdict`.
//!
//! Exit status is 0 on success, 2 when a counterexample search finds
//! nothing, and 1 on any other error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oodlab::experiment::{run_and_render, ExperimentConfig, Format, Mode};
use oodlab::io::write_text;
use oodlab::LabError;

#[derive(Parser)]
#[command(name = "oodlab", version, about = "Finite-domain OOD learnability laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Condition reports for every member and class, plus the verdict.
    Check(Common),
    /// Learning curve of excess α-risk over an n-grid.
    Curve(Common),
    /// Build an impossibility construction and its certificate.
    Counterexample(Common),
    /// Learnability verdict with the premises that fired.
    Verdict(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write output here instead of the config's `output` or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Table,
}

fn run(cli: Cli) -> Result<(), LabError> {
    let (mode, common) = match cli.command {
        Command::Check(c) => (Mode::Check, c),
        Command::Curve(c) => (Mode::Curve, c),
        Command::Counterexample(c) => (Mode::Counterexample, c),
        Command::Verdict(c) => (Mode::Verdict, c),
    };
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(m) = cfg.mode {
        if m != mode {
            return Err(LabError::Config(format!(
                "config is for mode {m:?}, but the {mode:?} subcommand was used"
            )));
        }
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    let format = match common.format {
        Some(OutFormat::Json) => Format::Json,
        Some(OutFormat::Csv) => Format::Csv,
        Some(OutFormat::Table) => Format::Table,
        None if mode == Mode::Curve => Format::Csv,
        None => Format::Json,
    };
    for w in cfg.load_warnings() {
        eprintln!("warning: {w}");
    }
    let text = run_and_render(mode, &cfg, format)?;
    let out = common.out.or_else(|| cfg.output.as_ref().map(|p| cfg.base_dir.join(p)));
    match out {
        Some(path) => write_text(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                LabError::NoCounterexample(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
