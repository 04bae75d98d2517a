use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "grig", version, about = "Exact computations in the first Grigorchuk group and its approximants")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    /// The Grigorchuk group Γ_∞.
    Grig,
    /// The free product Γ_{-1}.
    Free,
}

#[derive(Args, Debug, Clone)]
pub struct PresSource {
    /// Presentation file (`gens:` / `involutions:` / `rel:` lines).
    #[arg(long, conflicts_with_all = ["gamma0", "level"])]
    pub pres: Option<PathBuf>,
    /// Γ_0 as the Coxeter group on a, b, d (the default).
    #[arg(long)]
    pub gamma0: bool,
    /// Γ_n on a, b, c, d for n ≥ -1.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "gamma0")]
    pub level: Option<i32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form in the free product Γ_{-1}.
    Reduce {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Order of an element of Γ_∞.
    Order {
        word: String,
        /// Recursion depth guard.
        #[arg(long, default_value_t = 512)]
        depth_cap: usize,
    },
    /// Wreath recursion images of a parity-0 word.
    Split { word: String },
    /// Torsion certificate for a word at a level (default i(|w|)).
    Certify {
        word: String,
        #[arg(long, allow_negative_numbers = true)]
        level: Option<i32>,
    },
    /// Certify every reduced word of length ≤ n at level i(n).
    VerifyNball {
        n: usize,
        /// Maximum number of words to enumerate.
        #[arg(long, default_value_t = 1 << 22)]
        cap: usize,
    },
    /// Size of the ball of radius n.
    Ball {
        n: usize,
        #[arg(long, value_enum, default_value_t = GroupArg::Grig)]
        group: GroupArg,
        /// Maximum number of elements kept by the BFS.
        #[arg(long, default_value_t = 1 << 22)]
        budget: usize,
        /// Also list a shortlex geodesic for every element.
        #[arg(long)]
        words: bool,
    },
    /// Ball sizes and entropy estimates for radii 0..=maxn.
    Growth {
        #[arg(long, value_enum, default_value_t = GroupArg::Grig)]
        group: GroupArg,
        #[arg(long)]
        maxn: usize,
        #[arg(long, default_value_t = 1 << 22)]
        budget: usize,
    },
    /// The relators u_n and v_n.
    Relators {
        #[arg(long)]
        level: u32,
    },
    /// Print a presentation of Γ_n, or of Γ_0 in Coxeter form.
    Present {
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        level: i32,
        #[arg(long)]
        coxeter: bool,
    },
    /// Todd–Coxeter enumeration.
    Coset {
        #[command(flatten)]
        source: PresSource,
        /// Words whose normal closure is factored out (added as relators).
        #[arg(long, value_delimiter = ',')]
        close: Vec<String>,
        /// Generators of the subgroup whose cosets are enumerated.
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<String>,
        /// Enumerate the cosets of the parity kernel Ξ.
        #[arg(long, conflicts_with = "subgroup")]
        xi: bool,
        #[arg(long, default_value_t = grigorchuk::cosets::DEFAULT_COSET_CAP)]
        cap: usize,
        /// Print the generator permutations on the cosets.
        #[arg(long)]
        emit_quotient: bool,
        /// Print a Reidemeister–Schreier presentation of the enumerated subgroup,
        /// taken in the group before `--close` (so `--close w` alone yields ⟨⟨w⟩⟩).
        #[arg(long)]
        emit_subgroup_pres: bool,
    },
    /// Abelian invariants of a presentation.
    Abelianize {
        #[command(flatten)]
        source: PresSource,
        #[arg(long, value_delimiter = ',')]
        close: Vec<String>,
    },
    /// Check the core-index lemma on every subgroup of the built-in groups.
    CoreLemma,
    /// Run every verification and report.
    CheckAll {
        /// `key = value` configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Radii for the n-ball check (`0` skips it).
        #[arg(long, value_delimiter = ',')]
        nball: Option<Vec<usize>>,
        /// Omit the timestamp and timings so output is reproducible.
        #[arg(long)]
        no_timestamp: bool,
    },
}
