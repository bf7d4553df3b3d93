use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Experiments on Weisfeiler-Leman refinement rounds, pebble games on XOR
/// systems, hard instances and partition algebras.
#[derive(Debug, Parser, Serialize)]
#[command(name = "wlbounds", version)]
pub struct Cli {
    /// Write the artifact here instead of stdout; a `<path>.provenance.json`
    /// sidecar records the configuration next to it.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// k-WL refinement on structures.
    #[command(subcommand)]
    Wl(WlCommand),
    /// XOR systems: translation, closures, satisfiability.
    #[command(subcommand)]
    Xor(XorCommand),
    /// The existential k-pebble game on XOR systems.
    #[command(subcommand)]
    Game(GameCommand),
    /// Instance generators.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Partition algebras along WL rounds.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Binary structures over l-tuples.
    #[command(subcommand)]
    Bin(BinCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WlCommand {
    /// Stabilize every structure in a file; one CSV row per structure.
    Stabilize {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
        /// Stop after this many rounds (default n^k, which always suffices).
        #[arg(long)]
        max_rounds: Option<usize>,
        /// One row per structure and round instead.
        #[arg(long)]
        per_round: bool,
    },
    /// First round in which k-WL tells two structures apart.
    Distinguish {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        max_rounds: Option<usize>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XorCommand {
    /// The twin structures of a system, in the structure text format.
    Translate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Pair-sum closure with supports of size at most k.
    Closure {
        #[arg(long)]
        k: usize,
        /// Number of attractor steps (default: until nothing changes).
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        input: PathBuf,
    },
    /// Satisfiability by Gaussian elimination over GF(2).
    Sat {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameCommand {
    /// Solve the game and report the Falsifier's least winning round count.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pebbles: usize,
        /// Stop the fixpoint after this many rounds.
        #[arg(long)]
        rounds: Option<usize>,
        /// Maximum number of game positions.
        #[arg(long)]
        budget: Option<u128>,
        /// Start position such as `x1=1,x3=0` (default: empty).
        #[arg(long, default_value = "")]
        start: String,
    },
    /// Check the closure certificate for Verifier surviving `rounds` rounds.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value = "")]
        start: String,
    },
    /// Play the Falsifier's layer-by-layer descent on a generated hard
    /// instance and dump the transcript.
    Descent {
        #[command(flatten)]
        hard: HardArgs,
        /// Verifier answers: optimal from the exact solver, or all zeros.
        #[arg(long, value_enum, default_value_t = VerifierKind::Optimal)]
        verifier: VerifierKind,
        #[arg(long)]
        budget: Option<u128>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifierKind {
    Optimal,
    Zeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpansionArgs {
    /// Expansion factor, e.g. `3/2` or `1.5`.
    #[arg(long, default_value = "3/2")]
    pub alpha: String,
    /// Fraction of the right side covered by the check, e.g. `1/4`.
    #[arg(long, default_value = "1/4")]
    pub gamma: String,
    #[arg(long, value_enum, default_value_t = CheckMode::Exhaustive)]
    pub check: CheckMode,
    /// Number of sets drawn in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Maximum number of sets enumerated in exhaustive mode.
    #[arg(long, default_value_t = 10_000_000)]
    pub check_budget: u128,
}

#[derive(Debug, Args, Serialize)]
pub struct HardArgs {
    /// Right degree of the base graph.
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub attempts: usize,
    #[command(flatten)]
    pub expansion: ExpansionArgs,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenCommand {
    /// Random right-regular bipartite graph as its XOR system.
    Expander {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        expansion: ExpansionArgs,
    },
    /// Layered graph over a random base graph, with the layer-0 constraints.
    Layered {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        expansion: ExpansionArgs,
    },
    /// Unsatisfiable system on a verified layered expander.
    Hard {
        #[command(flatten)]
        hard: HardArgs,
        /// Add unused variables up to this total.
        #[arg(long)]
        pad: Option<usize>,
    },
    /// k-uniform set family with bounded pairwise intersections.
    Family(FamilyArgs),
    /// The chain of stable colorings built from a set family.
    Chain(FamilyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long)]
    pub k: usize,
    /// Field size of the polynomial construction (a prime at least k).
    #[arg(long, required_unless_present = "greedy")]
    pub q: Option<usize>,
    /// Use the lexicographic greedy construction on `--universe` points.
    #[arg(long, requires = "universe")]
    pub greedy: bool,
    /// Universe size; pads the polynomial family with unused points.
    #[arg(long)]
    pub universe: Option<usize>,
    /// Keep only the first this many members.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraCommand {
    /// Algebra dimension of every WL round's partition.
    Chain {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
        /// Maximum number of tensor products per closure.
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinCommand {
    /// The binary structure over l-tuples, in the structure text format.
    Build {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// k-WL on two structures next to 2-WL on their binary structures.
    Tradeoff {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        max_rounds: Option<usize>,
    },
}
