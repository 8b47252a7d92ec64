use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "toeplitz", version, about = "Toeplitz-word constructions and exact orbit statistics")]
pub struct Cli {
    /// Worker threads for parallel sums (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a residue-tower pair with holes on unit k-th powers.
    ConstructA(ConstructTowerArgs),
    /// Build a residue-tower pair with holes on the non-l-th-power set.
    ConstructB(ConstructTowerArgs),
    /// Build the block-pair construction along a polynomial.
    ConstructIwanik(ConstructIwanikArgs),
    /// Number-theoretic helpers.
    #[command(subcommand)]
    Nt(NtCommand),
    /// Birkhoff averages along a polynomial (CSV).
    Average(AverageArgs),
    /// Checkpoint divergence report.
    Checkpoints(CheckpointArgs),
    /// Oscillation of averages against the hole-density bound (CSV).
    Probe(ProbeArgs),
    /// Orbit average against the block-frequency estimate.
    Equi(EquiArgs),
    /// Density verdict, or the almost-prime obstruction for a tower.
    Density(DensityArgs),
    /// Aligned block frequencies.
    Ap(ApArgs),
    /// Re-run the construction invariants on a pair file.
    Verify(PairArg),
}

#[derive(Args, Debug)]
pub struct ModeArgs {
    /// Derive everything from the growth conditions; no overrides.
    #[arg(long, conflicts_with = "relaxed")]
    pub strict: bool,
    /// Use caller-supplied primes/moduli (the default).
    #[arg(long)]
    pub relaxed: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FillName {
    Zero,
    One,
    Seeded,
}

#[derive(Args, Debug)]
pub struct ConstructTowerArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub l: u64,
    #[command(flatten)]
    pub mode: ModeArgs,
    /// Primes p_1 < p_2 < … (construction A, relaxed).
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Moduli n_1 | n_2 | … (construction B, relaxed).
    #[arg(long, value_delimiter = ',')]
    pub tower: Vec<u64>,
    /// Number of levels (strict mode).
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, value_enum, default_value = "zero")]
    pub fill: FillName,
    /// Seed for `--fill seeded`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cap on the length of any level.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output file (default: standard output).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructIwanikArgs {
    #[arg(long)]
    pub poly: String,
    /// Moduli n_1 | n_2 | …
    #[arg(long, value_delimiter = ',', required = true)]
    pub tower: Vec<u64>,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum NtCommand {
    /// #{m ∈ [1, N] : m^k ≡ a (mod n)}, or its maximum over a.
    Rho {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        big_n: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
    },
    /// k-th power residues mod n, or the residues a polynomial covers.
    Residues {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: Option<u64>,
        /// Restrict to units.
        #[arg(long)]
        units: bool,
        #[arg(long, conflicts_with = "k")]
        poly: Option<String>,
    },
    /// Whether a polynomial permutes Z/nZ.
    Perm {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: u64,
        /// Treat n as a prime and test the lifting criterion (permutation mod n²).
        #[arg(long)]
        lift: bool,
    },
    /// Dickson polynomial D_n(α, x).
    Dickson {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
    },
    /// Solutions of x^k − y^l = a over F_p against the Weil bound.
    Weil {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// The non-l-th-power set used by construction B.
    Aset {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        /// Also print the elements.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args, Debug)]
pub struct PairArg {
    /// TPV1 pair file.
    #[arg(long)]
    pub pair: PathBuf,
}

#[derive(Args, Debug)]
pub struct AverageArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub poly: String,
    /// Sample sizes (comma-separated, strictly increasing).
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub big_n: Vec<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub shift: Vec<i128>,
    /// G, ind:0, ind:1 or block:<odd 0/1 word>.
    #[arg(long, default_value = "G")]
    pub cylinder: String,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write a self-contained gnuplot script here.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckpointArgs {
    #[arg(long)]
    pub pair: PathBuf,
    /// Defaults to the construction's own polynomial.
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value = "G")]
    pub cylinder: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub shifts: Vec<i128>,
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub big_n: Vec<u64>,
    /// Level whose hole density sets ε (default: top).
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EquiArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value = "G")]
    pub cylinder: String,
    /// Allowed distance between the two intervals ("p/q" or decimal).
    #[arg(long, env = "TOL_OVERRIDE", default_value = "1/100")]
    pub tol: String,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long, required_unless_present = "almost_prime")]
    pub pair: Option<PathBuf>,
    #[arg(long, required_unless_present = "almost_prime")]
    pub poly: Option<String>,
    /// Level whose essential periods are used (default: top).
    #[arg(long)]
    pub level: Option<usize>,
    /// Radius bound for the cylinder witness search.
    #[arg(long, default_value_t = 3)]
    pub witness_radius: u32,
    /// Report the almost-prime obstruction for this l instead.
    #[arg(long, requires = "tower", conflicts_with_all = ["pair", "poly"])]
    pub almost_prime: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub tower: Vec<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ApArgs {
    /// Block B (0/1 word).
    #[arg(long, requires = "word")]
    pub block: Option<String>,
    /// Word C (0/1 word) whose aligned blocks are counted.
    #[arg(long, requires = "block")]
    pub word: Option<String>,
    /// Block-pair pair file; the blocks are rebuilt from its metadata.
    #[arg(long, conflicts_with_all = ["block", "poly"])]
    pub pair: Option<PathBuf>,
    /// Polynomial and tower to build the blocks from.
    #[arg(long, requires = "tower", conflicts_with = "block")]
    pub poly: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub tower: Vec<u64>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
