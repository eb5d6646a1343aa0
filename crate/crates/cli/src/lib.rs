//! Command-line front end for `coinduce`.
//!
//! ```text
//! coinduce run --algebra A:1 --format tex --out out
//! coinduce run --config job.toml --workers 4
//! coinduce ledger
//! ```
//!
//! Exit codes:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success |
//! | 2 | bad configuration or arguments |
//! | 3 | algebra, decomposition or representation failed validation |
//! | 4 | engine failure: truncation overflow, cyclic graph, engines disagree |
//! | 5 | a requested verification check failed |
//! | 6 | I/O error |

pub mod cache;
pub mod config;
pub mod emit;
pub mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use coinduce::realize::Side;

use config::{ConfigFile, EngineChoice, JobConfig, OutputFormat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("validation: {0}")]
    Validation(String),
    #[error("engine: {0}")]
    Engine(String),
    #[error("verification failed:\n{0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Engine(_) => 4,
            CliError::Verification(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "coinduce", version, about = "Differential-operator realizations of induced and coinduced modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute operators or statistics for one job.
    Run(RunArgs),
    /// Print the convention ledger.
    Ledger,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// TOML job file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `A:n`, `D:n`, `E:n`, `gl:n` or `custom:FILE`.
    #[arg(long)]
    pub algebra: Option<String>,
    /// `triangular` or `custom:FILE`.
    #[arg(long)]
    pub decomp: Option<String>,
    #[arg(long, value_parser = parse_side)]
    pub module: Option<Side>,
    /// `symbolic`, `adjoint`, comma-separated weights, or `custom:FILE`.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, value_parser = parse_engine)]
    pub engine: Option<EngineChoice>,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Run the homomorphism and degree checks.
    #[arg(long)]
    pub verify: bool,
    /// Also write path statistics.
    #[arg(long)]
    pub stats: bool,
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "coinduced" => Ok(Side::Coinduced),
        "induced" => Ok(Side::Induced),
        _ => Err(format!("expected coinduced or induced, got {s:?}")),
    }
}

fn parse_engine(s: &str) -> Result<EngineChoice, String> {
    match s {
        "graph" => Ok(EngineChoice::Graph),
        "series" => Ok(EngineChoice::Series),
        "both" => Ok(EngineChoice::Both),
        _ => Err(format!("expected graph, series or both, got {s:?}")),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "tex" => Ok(OutputFormat::Tex),
        "structured" => Ok(OutputFormat::Structured),
        "stats-only" => Ok(OutputFormat::StatsOnly),
        _ => Err(format!("expected tex, structured or stats-only, got {s:?}")),
    }
}

impl RunArgs {
    pub fn job(&self) -> Result<JobConfig, CliError> {
        let (file, base) = match &self.config {
            Some(p) => (ConfigFile::load(p)?, p.parent().map(|b| b.to_path_buf())),
            None => (ConfigFile::default(), None),
        };
        let flags = ConfigFile {
            algebra: self.algebra.clone(),
            decomp: self.decomp.clone(),
            module: self.module,
            representation: self.weights.clone(),
            engine: self.engine,
            truncation: self.truncation,
            format: self.format,
            out: self.out.clone(),
            cache_dir: self.cache_dir.clone(),
            verify: self.verify.then_some(true),
            stats: self.stats.then_some(true),
            workers: self.workers,
        };
        // custom paths in the file are relative to the file, flag paths to the
        // working directory
        let mut merged = file.merge(flags.clone());
        rebase_file_paths(&mut merged, &flags, base.as_deref());
        JobConfig::resolve(merged)
    }
}

/// Rebase the path-valued fields that came from the file (not the flags).
fn rebase_file_paths(merged: &mut ConfigFile, flags: &ConfigFile, base: Option<&std::path::Path>) {
    let Some(base) = base else { return };
    let fix = |field: &mut Option<String>, from_flag: bool| {
        if from_flag {
            return;
        }
        if let Some(s) = field.as_mut() {
            if let Some(p) = s.strip_prefix("custom:") {
                let p = PathBuf::from(p.trim());
                if p.is_relative() {
                    *s = format!("custom:{}", base.join(p).display());
                }
            }
        }
    };
    fix(&mut merged.algebra, flags.algebra.is_some());
    fix(&mut merged.decomp, flags.decomp.is_some());
    fix(&mut merged.representation, flags.representation.is_some());
}

/// Parse arguments, run, report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Ledger => {
            print!("{}", coinduce::conventions::render_ledger());
            0
        }
        Command::Run(args) => match args.job().and_then(|job| run::run(&job)) {
            Ok(summary) => {
                for r in &summary.reports {
                    println!("{r}");
                }
                for f in &summary.files {
                    println!("wrote {}", f.display());
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    }
}
