use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "det-waring", version, about = "Power-sum decompositions of the determinant, checked exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Emit a decomposition as JSON, LaTeX or text.
    Decompose,
    /// Check a decomposition against its target polynomial.
    Verify,
    /// Check the coefficient lemma against brute-force expansion.
    LemmaCheck,
    /// Separating functionals and the exact rank of the main terms.
    Independence,
    /// Symmetry group orders, the action on the terms and related lemmas.
    Symmetries,
    /// Defining equations of the term points, optionally counted over GF(p).
    Equations,
    /// Upper and lower bounds on the Waring rank for 2 <= d <= --d.
    Bounds,
    /// Time verification in both modes, sequential and parallel.
    Bench,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Verify => "verify",
            Command::LemmaCheck => "lemma-check",
            Command::Independence => "independence",
            Command::Symmetries => "symmetries",
            Command::Equations => "equations",
            Command::Bounds => "bounds",
            Command::Bench => "bench",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Main,
    Classical,
    Gurvits,
    Monomial,
    KrishnaMakam,
}

impl SchemeArg {
    pub fn name(self) -> &'static str {
        match self {
            SchemeArg::Main => "main",
            SchemeArg::Classical => "classical",
            SchemeArg::Gurvits => "gurvits",
            SchemeArg::Monomial => "monomial",
            SchemeArg::KrishnaMakam => "krishna-makam",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[default]
    Expansion,
    Streaming,
    Both,
}

#[derive(Clone, Debug, clap::Args)]
pub struct Opts {
    /// Matrix size (for `bounds`, the largest size in the table).
    #[arg(long, global = true)]
    pub d: Option<usize>,
    #[arg(long, value_enum, global = true, default_value = "main")]
    pub scheme: SchemeArg,
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Prime for the finite-field point count in `equations`.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Exhaustive variant of a check (full group action, full GF(p) scan).
    #[arg(long, global = true)]
    pub full: bool,
    /// Allow sizes beyond the default budget.
    #[arg(long, global = true)]
    pub force: bool,
    /// Worker threads; 1 selects the sequential code paths, 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Verification strategy for `verify`.
    #[arg(long, value_enum, global = true, default_value = "expansion")]
    pub mode: ModeArg,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,
}
