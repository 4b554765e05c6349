mod bench;
mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Certifying blow-up decompositions for tree- and apex-tree-minor-free graphs.
#[derive(Parser)]
#[command(name = "blowup", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a graph, or report a minor model of the pattern.
    Decompose(DecomposeArgs),
    /// Check a certificate, model or separation against a graph.
    Verify(VerifyArgs),
    /// Write a generated instance as an edge list.
    Gen(GenArgs),
    /// Run every instance in a directory and print a CSV report.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Tree,
    Apex,
    Ep,
    Separation,
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub graph: PathBuf,
    /// Pattern tree JSON, or an array of trees for `--mode ep`.
    #[arg(long)]
    pub pattern: PathBuf,
    /// JSON object with optional "S" and "R" vertex arrays.
    #[arg(long)]
    pub sets: Option<PathBuf>,
    /// Skip the exact pre-check for the pattern.
    #[arg(long)]
    pub assume_minor_free: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Certificate, model or separation JSON.
    #[arg(long)]
    pub certificate: PathBuf,
    /// Pattern tree, needed when the file does not embed one.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub sets: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Gnp,
    Grid,
    Caterpillar,
    Complete,
    BlowupOfPath,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub spine: Option<usize>,
    #[arg(long)]
    pub legs: Option<usize>,
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Resample until the graph has no minor of this tree.
    #[arg(long)]
    pub minor_free: Option<PathBuf>,
    /// With `--minor-free`, exclude the apex-tree instead.
    #[arg(long)]
    pub apex: bool,
    #[arg(long, default_value_t = 1000)]
    pub attempts: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Directory of `NAME.el` graphs with `NAME.tree.json` or `NAME.apex.json` patterns.
    pub dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub assume_minor_free: bool,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let code = match cli.cmd {
        Command::Decompose(a) => commands::decompose(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Bench(a) => bench::run(&a),
    };
    ExitCode::from(code)
}
