mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "entnet", version, about = "Entanglement distribution experiments", args_override_self = true)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Flat key-value TOML file with default flag values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the optimizer and Monte Carlo.
    #[arg(long, global = true, env = "ENTNET_SEED", default_value_t = 42)]
    seed: u64,
    /// Worker threads for percolation runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One swap of two states: merits per measurement.
    Swap(SwapArgs),
    /// Repeater chains.
    Chain(ChainArgs),
    /// The square cell.
    Square(SquareArgs),
    /// Hierarchical lattice recursions.
    Recursion(RecursionArgs),
    /// Bond-percolation Monte Carlo.
    Percolate(PercolateArgs),
    /// Strategy comparisons: thresholds, two repeaters, decay rates, doubling.
    Compare(CompareArgs),
}

const SUBCOMMANDS: [&str; 6] = ["swap", "chain", "square", "recursion", "percolate", "compare"];

#[derive(Args, Debug)]
pub struct SwapArgs {
    #[arg(long)]
    pub alpha0: f64,
    #[arg(long)]
    pub beta0: f64,
    /// zz, xz or all; ignored when --probs is given.
    #[arg(long, default_value = "all")]
    pub basis: String,
    /// Target Bell outcome probabilities `p1,p2,p3,p4`.
    #[arg(long)]
    pub probs: Option<String>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    /// cs, xz, zz or all.
    #[arg(long, default_value = "all")]
    pub strategy: String,
    /// Repeater counts: `N`, `A..B` or a comma list.
    #[arg(long = "N", default_value = "1..30")]
    pub n: String,
    #[arg(long)]
    pub phi0: f64,
    /// Also report the exact enumeration for `N` up to this value.
    #[arg(long)]
    pub enumerate: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SquareArgs {
    /// `phi0` values: `x`, `a:b:step` or a comma list.
    #[arg(long, default_value = "0.5:0.99:0.01")]
    pub phi0: String,
    /// Run the numeric optimizer at every point.
    #[arg(long)]
    pub numeric: bool,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
}

#[derive(Args, Debug)]
pub struct RecursionArgs {
    /// diamond, tree or centipede.
    #[arg(long)]
    pub kind: String,
    /// Bond SCP `E0` of the tree and centipede.
    #[arg(long, default_value_t = 0.0)]
    pub e0: f64,
    /// `E` values: `x`, `a:b:step` or a comma list.
    #[arg(long, default_value = "0:1:0.01")]
    pub sweep: String,
    /// Report fixed points instead of the map.
    #[arg(long)]
    pub fixed_points: bool,
    /// Report the orbit of this starting value.
    #[arg(long)]
    pub orbit: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
}

#[derive(Args, Debug)]
pub struct PercolateArgs {
    /// square, triangular, honeycomb, honeycomb_doubled, asymmetric_triangular.
    #[arg(long)]
    pub lattice: String,
    /// Bond probabilities: `x`, `a:b:step` or a comma list.
    #[arg(long)]
    pub p: String,
    /// Dashed-bond probability of the asymmetric triangular lattice.
    #[arg(long, default_value_t = 0.0)]
    pub p_dashed: f64,
    #[arg(long = "L", default_value_t = 128)]
    pub l: usize,
    /// torus or open.
    #[arg(long, default_value = "torus")]
    pub boundary: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// theta, pi or tau.
    #[arg(long, default_value = "theta")]
    pub measure: String,
    /// Node pair for tau and pi: diagonal or adjacent.
    #[arg(long, default_value = "diagonal")]
    pub pair: String,
    /// Apply the measurement-induced rewiring of the lattice first.
    #[arg(long)]
    pub transform: bool,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// thresholds, two-repeater, decay or doubling.
    #[arg(long)]
    pub mode: String,
    /// Sweep values (`a0` for two-repeater, `p` for doubling).
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, default_value_t = 0.7)]
    pub b0: f64,
    #[arg(long, default_value_t = 0.7)]
    pub c0: f64,
    #[arg(long, default_value_t = 0.7)]
    pub phi0: f64,
    #[arg(long)]
    pub numeric: bool,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    /// Repeater range of the decay fit.
    #[arg(long = "N", default_value = "20..60")]
    pub n: String,
    #[arg(long = "L", default_value_t = 128)]
    pub l: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

pub struct Global {
    pub seed: u64,
    pub threads: Option<usize>,
}

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config::find_config(&args) {
        match config::config_args(std::path::Path::new(&path)) {
            Ok(extra) => args = config::splice(&args, &SUBCOMMANDS, extra),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let global = Global { seed: cli.seed, threads: cli.threads };
    let result = match &cli.command {
        Command::Swap(a) => commands::swap(a),
        Command::Chain(a) => commands::chain(a),
        Command::Square(a) => commands::square(a, &global),
        Command::Recursion(a) => commands::recursion(a),
        Command::Percolate(a) => commands::percolate(a, &global),
        Command::Compare(a) => commands::compare(a, &global),
    };
    match result {
        Ok(table) => match output::write(&table, cli.format, cli.output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
