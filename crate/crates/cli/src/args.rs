use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Lorenz-robust and OWA-optimal path search over scenario graphs.
#[derive(Parser, Debug)]
#[command(name = "robust-paths", version)]
pub struct Cli {
    /// Write the output to FILE instead of stdout
    #[arg(short = 'o', long = "output", global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Print nothing on stdout; the exit code carries the answer
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated instance as graph JSON
    Generate(GenerateArgs),
    /// Run the label-expanding search
    Search(SearchArgs),
    /// Exhaustive reference answers by path enumeration
    Oracle(OracleArgs),
    /// Check search results against the oracle
    Compare(CompareArgs),
    /// Is there a path whose Lorenz vector weakly dominates a target's?
    Decide(DecideArgs),
    /// Compare two cost vectors under every dominance relation
    Dominance(DominanceArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// The six-node two-scenario worked example
    Figure1,
    /// Staged graph whose paths all share one Lorenz vector class
    Hansen {
        #[arg(long)]
        p: u32,
    },
    /// Staged graph whose paths are all Lorenz non-dominated
    Antilorenz {
        #[arg(long)]
        p: u32,
    },
    /// Two-scenario reduction of a partition instance
    Partition {
        #[arg(long, value_parser = parse_list, value_name = "S1,S2,..")]
        sizes: List,
    },
    /// Seeded layered DAG
    Random {
        #[arg(long, default_value_t = 10)]
        nodes: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Number of scenarios
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        cost_min: u64,
        #[arg(long, default_value_t = 9)]
        cost_max: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Lorenz,
    Owa,
    Pareto,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    Zero,
    Arc,
    Ideal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule1 {
    PerMember,
    LexBest,
}

/// OWA weights, either as cumulative `phi` values or as the weights proper.
#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// Cumulative weights phi_1 < ... < phi_m, e.g. 0.9,1.0
    #[arg(long, value_name = "P1,P2,..", conflicts_with = "weights")]
    pub phi: Option<String>,

    /// Strictly decreasing positive weights w_1 > ... > w_m, e.g. 0.9,0.1
    #[arg(long, value_name = "W1,W2,..")]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Lorenz)]
    pub mode: Mode,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, value_enum, default_value_t = Heuristic::Arc)]
    pub heuristic: Heuristic,
    /// Record expanded labels and prunes
    #[arg(long)]
    pub trace: bool,
    /// Also write the expanded labels as tab-separated rows to FILE
    #[arg(long, value_name = "FILE")]
    pub trace_tsv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Rule1::PerMember)]
    pub rule1_policy: Rule1,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Paths,
    Pareto,
    Lorenz,
    Owa,
    Decide,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleMode::Lorenz)]
    pub mode: OracleMode,
    /// Target cost vector for --mode decide
    #[arg(long, value_parser = parse_list, value_name = "C1,C2,..")]
    pub target: Option<List>,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, default_value_t = robust_paths::oracle::DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Heuristic::Arc)]
    pub heuristic: Heuristic,
    /// Also compare the OWA optimum for these weights
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, default_value_t = robust_paths::oracle::DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("instance").required(true).args(["graph", "partition"])))]
pub struct DecideArgs {
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Item sizes; decides the partition reduction of these sizes
    #[arg(long, value_parser = parse_list, value_name = "S1,S2,..")]
    pub partition: Option<List>,
    /// Required with --graph; defaults to the even split with --partition
    #[arg(long, value_parser = parse_list, value_name = "C1,C2,..")]
    pub target: Option<List>,
    #[arg(long, default_value_t = robust_paths::oracle::DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
}

#[derive(Args, Debug)]
pub struct DominanceArgs {
    #[arg(long, value_parser = parse_list, value_name = "C1,C2,..")]
    pub x: List,
    #[arg(long, value_parser = parse_list, value_name = "C1,C2,..")]
    pub y: List,
    /// Also report OWA values under these weights
    #[command(flatten)]
    pub weights: WeightArgs,
}

/// A comma-separated list of integers given as one flag value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List(pub Vec<u64>);

fn parse_list(text: &str) -> Result<List, String> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("{part:?} is not a non-negative integer"))
        })
        .collect::<Result<_, _>>()
        .map(List)
}
