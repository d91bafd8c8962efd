//! Command line front end for the constrained-system toolkit.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use impasse_core::resolve::ResolveConfig;
use rayon::prelude::*;

#[derive(Debug, Parser)]
#[command(name = "impasse", version, about = "Resolution and classification of planar constrained systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Singularity verdict, supports and Newton polygon at the origin.
    Analyze(Common),
    /// Resolution tree and singularity scheme word.
    Resolve(Common),
    /// Compare the scheme words of two systems.
    Equiv(Common),
    /// ADE type of the impasse curve and the matching row of conditions.
    Ade(Common),
    /// Principal part of the adjoint field and Newton non-degeneracy.
    Principal(Common),
    /// Newton polygons; `--svg` draws the adjoint one.
    Polygon(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    max_depth: u32,
    /// Never shear the root system.
    #[arg(long)]
    no_shear: bool,
    /// Print V1/C1 letters with both sign representatives.
    #[arg(long)]
    raw_signs: bool,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker threads for batches of files.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("resolution failed: {0}")]
    Resolution(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Resolution(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<impasse_core::Error> for CliError {
    fn from(e: impasse_core::Error) -> Self {
        if e.is_parse() {
            CliError::Parse(e.to_string())
        } else if e.is_resolution() {
            CliError::Resolution(e.to_string())
        } else {
            CliError::Semantic(e.to_string())
        }
    }
}

/// What a command prints, and its exit status.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub code: u8,
}

pub struct RunConfig {
    pub resolve: ResolveConfig,
    pub json: bool,
    pub svg: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Analyze(c) => ("analyze", c),
        Command::Resolve(c) => ("resolve", c),
        Command::Equiv(c) => ("equiv", c),
        Command::Ade(c) => ("ade", c),
        Command::Principal(c) => ("principal", c),
        Command::Polygon(c) => ("polygon", c),
    };
    let cfg = RunConfig {
        resolve: ResolveConfig {
            max_depth: common.max_depth as usize,
            shear_allowed: !common.no_shear,
            letter_sign_normalization: !common.raw_signs,
            ..ResolveConfig::default()
        },
        json: common.json,
        svg: common.svg.clone(),
    };

    let results: Vec<Result<Report, CliError>> = if name == "equiv" {
        vec![commands::equiv(&common.files, &cfg)]
    } else if cfg.svg.is_some() && common.files.len() > 1 {
        vec![Err(CliError::Semantic("--svg takes a single input file".to_string()))]
    } else {
        let run = |f: &PathBuf| commands::run_one(name, f, &cfg);
        match rayon::ThreadPoolBuilder::new().num_threads(common.jobs.max(1)).build() {
            Ok(pool) => pool.install(|| common.files.par_iter().map(run).collect()),
            Err(e) => vec![Err(CliError::Io(e.to_string()))],
        }
    };

    let mut code = 0u8;
    for r in results {
        match r {
            Ok(rep) => {
                if cfg.json {
                    println!("{}", serde_json::to_string_pretty(&rep.json).unwrap_or_default());
                } else {
                    print!("{}", rep.text);
                }
                code = code.max(rep.code);
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = code.max(e.code());
            }
        }
    }
    ExitCode::from(code)
}
