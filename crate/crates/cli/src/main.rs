use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Ordered graph homomorphism toolkit.
///
/// Exit codes: 0 yes/success, 1 no, 2 usage or input error (or a solver
/// disagreement), 3 size guard exceeded. Set ORDHOM_GUARD (for example
/// `hom=80,core=16`) to adjust the brute-force size guards.
#[derive(Debug, Parser)]
#[command(name = "ordhom", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a graph file is well formed and describe it.
    Validate { graph: PathBuf },
    /// Decide whether G maps homomorphically to H.
    Hom {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        #[command(flatten)]
        out: DecisionOutput,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Decide G -> H where both are unions of copies of a connected core.
    Homf {
        g: PathBuf,
        #[arg(long)]
        template: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Fpt)]
        algo: Algo,
        #[command(flatten)]
        out: DecisionOutput,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Decide whether N is an ordered subgraph of M.
    Sub {
        n: PathBuf,
        m: PathBuf,
        #[arg(long)]
        induced: bool,
        #[command(flatten)]
        out: DecisionOutput,
    },
    /// Decide whether a permutation pattern occurs in a host permutation.
    /// Arguments are permutation literals ("2 1") or files holding one.
    Pattern {
        pattern: String,
        host: String,
        #[arg(long)]
        json: bool,
    },
    /// Encode a permutation as an ordered matching.
    Reduce {
        #[arg(value_enum)]
        kind: ReductionKind,
        #[arg(long)]
        perm: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Collapse a graph towards its matching core.
    Collapse {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the quotient map.
        #[arg(long)]
        map: bool,
        #[arg(long)]
        single_pass: bool,
        /// Only merge edges of equal color.
        #[arg(long)]
        colored: bool,
    },
    /// Collapse a union of template copies to its core.
    Collapsef {
        graph: PathBuf,
        #[arg(long)]
        template: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        map: bool,
    },
    /// Compute the core of a graph.
    Core {
        graph: PathBuf,
        /// Confirm the result with the brute core check.
        #[arg(long)]
        certify: bool,
        /// Only decide whether a non-surjective endomorphism exists.
        #[arg(long)]
        decide: bool,
        #[command(flatten)]
        out: DecisionOutput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate seeded instances.
    Gen(GenArgs),
    /// Cross-check the permutation encodings against the brute oracles.
    CheckReduction {
        #[arg(value_enum)]
        kind: ReductionKind,
        #[arg(long, requires = "host")]
        pattern: Option<String>,
        #[arg(long, requires = "pattern")]
        host: Option<String>,
        /// Check every pattern up to this size ...
        #[arg(long, conflicts_with = "pattern", requires = "max_host")]
        max_pattern: Option<usize>,
        /// ... against every host up to this size.
        #[arg(long, requires = "max_pattern")]
        max_host: Option<usize>,
    },
    /// Render a graph as Graphviz DOT with vertices on a line.
    ExportDot {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// The collapse-based solver when it applies, brute force otherwise.
    Auto,
    Fpt,
    Brute,
    /// Run both and fail on disagreement.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionKind {
    /// Separated matching, for subgraph containment.
    Sub,
    /// Gadget matching, for homomorphism.
    Hom,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DecisionOutput {
    /// Print the witness map.
    #[arg(long)]
    pub witness: bool,
    /// Print a JSON result envelope instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    RandomGraph,
    RandomMatching,
    Permutation,
    Inflate,
    H0Matching,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: GenFamily,
    #[arg(long)]
    pub seed: u64,
    /// Vertex count (random-graph).
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (random-graph).
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
    /// Edge count (random-matching).
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub crossing_bias: f64,
    /// Permutation size.
    #[arg(long)]
    pub size: Option<usize>,
    /// Matching to inflate.
    #[arg(long)]
    pub core: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub isolated: usize,
    /// Template graph (h0-matching).
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub copies: usize,
    #[arg(long, default_value_t = 0.5)]
    pub interleave_bias: f64,
    /// Color edges from this many colors.
    #[arg(long)]
    pub palette: Option<usize>,
    /// Number of instances, using seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Write instances here and print a manifest line per instance.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::error_code(&e))
        }
    }
}
