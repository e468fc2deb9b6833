//! Command-line front end: loads a scenario configuration, runs one check
//! suite and writes its report under `<out>/<config digest>/`.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{cmd_contexts, cmd_decohere, cmd_frames, cmd_ghz_check, cmd_paradox, CommandOutput, RunError};
pub use config::{ConfigError, Overrides, ScenarioConfig};
pub use report::{write_report, Check, RunReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "wignerghz", version, about = "GHZ / extended Wigner's friend scenario checks")]
pub struct Cli {
    /// Scenario configuration (JSON); defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory for reports.
    #[arg(long, global = true, value_name = "DIR", env = "WIGNERGHZ_OUT")]
    pub out: Option<PathBuf>,
    /// Numeric tolerance for probability and expectation checks.
    #[arg(long, global = true, value_name = "X")]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Keep only contexts whose events share a simultaneity frame.
    #[arg(long, global = true, value_enum)]
    pub frame_filter: Option<Switch>,
    #[arg(long, global = true, value_name = "N")]
    pub lab_width: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Born tables of the three-atom state against the GHZ conditions.
    GhzCheck,
    /// Parity constraints from the scenario, their inconsistency and the global-section check.
    Paradox,
    /// Incompatibility graph and maximal contexts of assessment.
    Contexts,
    /// Simultaneity frames for triples of measurement events.
    Frames,
    /// Decay of the GHZ correlation under pointer dephasing, and record erasure.
    Decohere,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            tolerance: self.tolerance,
            frame_filter: self.frame_filter.map(|s| s == Switch::On),
            lab_width: self.lab_width,
            output_dir: self.out.clone(),
        }
    }

    pub fn load_config(&self) -> Result<ScenarioConfig, ConfigError> {
        match &self.config {
            Some(p) => ScenarioConfig::load(p, &self.overrides()),
            None => ScenarioConfig::from_text("", &self.overrides()),
        }
    }
}

pub fn execute(command: Command, cfg: &ScenarioConfig) -> Result<CommandOutput, RunError> {
    match command {
        Command::GhzCheck => cmd_ghz_check(cfg),
        Command::Paradox => cmd_paradox(cfg),
        Command::Contexts => cmd_contexts(cfg),
        Command::Frames => cmd_frames(cfg),
        Command::Decohere => cmd_decohere(cfg),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match cli.load_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if cli.format == Format::Json {
        for w in &cfg.warnings {
            eprintln!("warning: {w}");
        }
    }
    let output = match execute(cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    let path = match write_report(&output.report, &output.artifacts, &cfg.output_dir) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            return EXIT_FAIL;
        }
    };
    match cli.format {
        Format::Text => {
            print!("{}", output.report.to_text());
            println!("report: {}", path.display());
        }
        Format::Json => print!("{}", output.report.to_json()),
    }
    output.report.exit_code()
}
