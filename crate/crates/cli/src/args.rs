use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "toeplitz", version, about = "Toeplitz constructions, Möbius statistics and block census")]
pub struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write μ(1..=N) as a sequence file over the alphabet (-1, 0, 1).
    Sieve(SieveArgs),
    /// Build a Toeplitz prefix.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Periodic-part densities and regularity defect of a sequence file.
    Analyze(AnalyzeArgs),
    /// Cesàro correlations between two sequences, or the strong-correlation test.
    Correlate(CorrelateArgs),
    /// Distinct block counts for a range of block lengths.
    Census(CensusArgs),
    /// Check one of the lemmas numerically and print a verdict.
    Verify(VerifyArgs),
    /// Apply window-shift steps to a sequence file.
    Mixing(MixingArgs),
    /// Regenerate the reference prefixes and diff them against the fixtures.
    ReproduceFigures(FiguresArgs),
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1 << 18)]
    pub segment: usize,
}

#[derive(Debug, Subcommand)]
pub enum BuildCommand {
    /// Block scheme: B_k written into the leftmost unfilled cells of [1, p_k].
    Block(BlockArgs),
    /// Readout scheme: y_k placed at the first unfilled cell, period p_k.
    Readout(ReadoutArgs),
}

#[derive(Debug, Args)]
pub struct BlockArgs {
    /// Period ratios q_1,q_2,… (p_k = q_1⋯q_k).
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u64>,
    /// File with one block of digits per line, or `auto` for zero blocks with a single 1.
    #[arg(long)]
    pub blocks: String,
    /// r_1,r_2,… for `--blocks auto` (default 1 for every level).
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<u64>,
    #[arg(long)]
    pub window: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Symbol written into cells no step reached; without it an incomplete prefix is an error.
    #[arg(long, allow_hyphen_values = true)]
    pub unfilled: Option<i8>,
    /// Step records as JSON.
    #[arg(long)]
    pub steps_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReadoutArgs {
    #[arg(long)]
    pub scale: String,
    /// `mobius`, `file PATH` or `example72`.
    #[arg(long, num_args = 1..=2, required = true)]
    pub y: Vec<String>,
    #[arg(long)]
    pub window: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Indicator of initial cells as a sequence file.
    #[arg(long)]
    pub z_out: Option<PathBuf>,
    /// Random blocks A_m for `example72` (default: Champernowne blocks).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of blocks A_m for `example72` (default: all the window allows).
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub steps_out: Option<PathBuf>,
    /// For `example72`: the generating sequence y as a sequence file.
    #[arg(long)]
    pub y_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Overrides the scale recorded in the file.
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Sub-window length for the Banach density extremes.
    #[arg(long)]
    pub banach: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long, required_unless_present = "sarnak")]
    pub a: Option<PathBuf>,
    #[arg(long, required_unless_present = "sarnak")]
    pub b: Option<PathBuf>,
    /// `geometric`, `final`, `every:N` or a comma-separated list of n.
    #[arg(long, default_value = "geometric")]
    pub schedule: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Correlate the Möbius readout of `--scale` with μ.
    #[arg(long, conflicts_with_all = ["a", "b"], requires_all = ["scale", "n"])]
    pub sarnak: bool,
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Construction window (default n).
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    /// Count only blocks whose share of zeros is at most this ratio, e.g. `10/27`.
    #[arg(long)]
    pub zero_cap: Option<String>,
    /// Census of |x| instead of x.
    #[arg(long)]
    pub abs: bool,
    /// Only the first N symbols.
    #[arg(long)]
    pub prefix: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    /// Zero frequency of z on [1, p_k].
    Shiftz1,
    /// Zeros of B_{k,0} stay zeros in B_{k,j}.
    Shiftz2,
    /// m isolated ones separated by at least m zeros.
    Shiftz5,
    /// Density independence for coprime periods.
    Staszek1,
    /// Tail products over squared primes.
    Staszek2,
    /// Hits of kM + r in a family of progressions.
    Nowy,
    /// Claim indices k_m.
    Claim,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub lemma: Lemma,
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub j_max: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of seeded progression families (seeds seed, seed+1, …).
    #[arg(long)]
    pub sets: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    pub slack: f64,
    /// For staszek1: every coprime pair 2 ≤ a < b with a·b at most this.
    #[arg(long)]
    pub product_max: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub periods: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub residues: Vec<u64>,
    /// For nowy: explicit M.
    #[arg(long)]
    pub modulus: Option<u64>,
    /// For nowy: explicit r.
    #[arg(long)]
    pub offset: Option<u64>,
    /// For nowy: explicit progressions `step:offset,…`.
    #[arg(long, value_delimiter = ',')]
    pub progressions: Vec<String>,
    /// For staszek2: number of primes used explicitly (default: all below 10⁶).
    #[arg(long)]
    pub n_partial: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MixingArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON list of window plans.
    #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
    pub plan: Option<PathBuf>,
    /// Steps `r,q;r,q;…`, planned one after another.
    #[arg(long)]
    pub auto: Option<String>,
    /// 1-based center of the central block (default: middle of the prefix).
    #[arg(long)]
    pub anchor: Option<usize>,
    #[arg(long)]
    pub scale: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub plan_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Also write the regenerated prefixes here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
