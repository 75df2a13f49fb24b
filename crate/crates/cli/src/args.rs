use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "diricci", version, about = "Exact Ricci curvature of directed graphs")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    /// Write the output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// `strict` rejects anti-parallel edge pairs; `split` allows them and
    /// takes d_x = d_x^in + d_x^out.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Strict)]
    pub degree_convention: Convention,

    /// Graph file format; guessed from the extension when omitted.
    #[arg(long, global = true, value_enum)]
    pub graph_format: Option<FileFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Strict,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    Edges,
    Json,
    Matrix,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph file.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// All-pairs hop distances ("inf" when unreachable).
    Distances(GraphArg),
    /// Lazy walk measure m_x^alpha.
    Measure {
        #[command(flatten)]
        graph: GraphArg,
        x: usize,
        /// "p/q" in [0, 1], or "limit" for alpha = 1 - e.
        #[arg(long)]
        alpha: String,
    },
    /// Transport distance between two walk measures, with coupling and dual.
    Wasserstein {
        #[command(flatten)]
        graph: GraphArg,
        x: usize,
        y: usize,
        /// "p/q" in [0, 1], or "limit" for alpha = 1 - e.
        #[arg(long)]
        alpha: String,
    },
    /// Curvature of every edge, or of one pair.
    Curvature {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        pair: Option<Vec<usize>>,
        /// "p/q" for kappa_alpha; "limit" (the default) for kappa.
        #[arg(long, default_value = "limit")]
        alpha: String,
    },
    /// Upper bound on kappa(x, y) from the distance potential.
    Bound {
        #[command(flatten)]
        graph: GraphArg,
        x: usize,
        y: usize,
    },
    /// Structural condition check, or a Ricci-flatness verdict.
    Check {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum)]
        condition: CheckKind,
    },
    /// Run the built-in fixture suite.
    Verify,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Graph file (edge list, JSON or adjacency CSV).
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    A,
    Outdeg,
    Phi,
    B,
    Flat,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Tournament on n >= 3 vertices.
    Complete { n: usize },
    /// Directed cycle on n >= 3 vertices.
    Cycle { n: usize },
    /// Product of the directed cycles C_g and C_h.
    Product { g: usize, h: usize },
    /// Circulant with edges (i, i + s mod n).
    Circulant {
        n: usize,
        #[arg(required = true)]
        offsets: Vec<usize>,
    },
    /// In-tree with every edge pointing towards the root.
    Tree {
        #[command(subcommand)]
        shape: TreeShape,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreeShape {
    /// Star with the given number of leaves, rooted at a leaf.
    Star { leaves: usize },
    /// Path of spine vertices, each with `legs` leaves.
    Caterpillar { spine: usize, legs: usize },
    /// Complete binary tree.
    Binary { depth: u32 },
}
