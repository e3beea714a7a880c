mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{execute, CliError};

#[derive(Debug, Parser)]
#[command(name = "linlogic", version, about = "Linear continuous logic workbench for finite metric structures")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FragmentKind {
    Listed,
    Enumerated,
    Saturated,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Built-in structure: M2, U2, DC3, DC3-open, C8 or singleton.
    #[arg(long, global = true)]
    pub corpus: Option<String>,
    /// Structure file.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Arithmetic; defaults to the structure's own.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Float comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum nesting of function symbols in terms.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Saturation rounds.
    #[arg(long, global = true, default_value_t = 8)]
    pub rounds: usize,
    /// Random combinations quantified per context and round.
    #[arg(long, global = true, default_value_t = 32)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value = "saturated")]
    pub fragment: FragmentKind,
    /// Formulas for `--fragment listed`, separated by `;`.
    #[arg(long, global = true)]
    pub listed: Option<String>,
    /// Fragment contexts beyond the arity in use.
    #[arg(long, global = true, default_value_t = 2)]
    pub extra: usize,
    /// Type arity (largest arity for `extremal`).
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with 1 on a negative verdict.
    #[arg(long = "assert", global = true)]
    pub assert_pass: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate a formula; without --at, tabulate it over all assignments.
    Eval {
        #[arg(long)]
        formula: String,
        /// Points for the free variables in order of first occurrence.
        #[arg(long)]
        at: Option<String>,
    },
    /// Check the metric and Lipschitz axioms.
    Validate,
    /// Build the ultramean of corpus entries or files.
    Ultramean {
        /// Comma-separated factor names or paths.
        #[arg(long)]
        factors: String,
        /// Comma-separated weights; uniform by default.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Compare a formula on the ultramean with the integral over the factors.
    LosCheck {
        #[arg(long)]
        factors: String,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        formula: String,
        /// One factor tuple per free variable, e.g. `a0,a1; a1,a1`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Realized n-type vectors with their realizers.
    Typespace,
    /// Extreme n-types with supporting functionals.
    Extreme,
    /// Decide whether a condition set cuts out a face of the n-type space.
    Face {
        /// Conditions over x, y, z (or x1, x2, ...) separated by `;`.
        #[arg(long)]
        gamma: String,
    },
    /// Distance between the types of two tuples.
    TypeMetric {
        #[arg(long = "a")]
        a: String,
        #[arg(long = "b")]
        b: String,
    },
    /// The face of pairs realizing two types at their type distance.
    SigmaFace {
        #[arg(long = "a")]
        a: String,
        #[arg(long = "b")]
        b: String,
    },
    /// Whether a subset is an elementary submodel.
    Elementary {
        #[arg(long)]
        subset: String,
    },
    /// Close a seed set under maximizers of templates.
    Closure {
        #[arg(long)]
        seeds: String,
        /// Template formula in x with parameters; repeatable.
        #[arg(long = "template")]
        templates: Vec<String>,
        /// Add minimizers too.
        #[arg(long)]
        argmin: bool,
    },
    /// Smallest elementary submodel.
    Minimal {
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
    },
    /// Whether every realized k-type, k <= n, is extreme.
    Extremal,
    /// Run a property suite.
    Suite {
        /// restriction-extreme, pair-extreme, over-symmetry, face-parameter or face-combinators.
        name: String,
        /// Random structures beyond the corpus.
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long)]
        no_corpus: bool,
    },
    /// List the built-in structures, or show one and re-check its expectations.
    Corpus { name: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match execute(&cli.command, &cli.opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let timing = start.elapsed().as_secs_f64() * 1000.0;
    let text = if cli.opts.json {
        let mut t = serde_json::to_string_pretty(&report.to_json(timing)).expect("report serializes");
        t.push('\n');
        t
    } else {
        report.to_table(timing)
    };
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}", CliError::Io(e));
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
