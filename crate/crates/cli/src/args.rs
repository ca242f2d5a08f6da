use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Verify, bound, search and simulate distributed space-time block codes for
/// two-hop amplify-and-forward relay networks.
#[derive(Debug, Parser)]
#[command(name = "dstbc", version, about)]
pub struct Cli {
    /// RNG seed for numeric checks and simulation.
    #[arg(long, global = true, env = "DSTBC_SEED")]
    pub seed: Option<u64>,

    /// Output file (stdout when absent).
    #[arg(long, global = true, env = "DSTBC_OUT")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, env = "DSTBC_FORMAT")]
    pub format: Option<Format>,

    /// Suppress progress and informational messages on stderr.
    #[arg(long, global = true, env = "DSTBC_QUIET")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a code file against the no-CSI and CPI membership conditions.
    Verify(VerifyArgs),
    /// Print the data-rate upper bounds for N symbols and K relays.
    Bounds(BoundsArgs),
    /// Exhaustive search over a small space of structured codes.
    Search(SearchArgs),
    /// Monte Carlo BER simulation.
    Simulate(SimulateArgs),
    /// Write a code file for one of the built-in constructions.
    Construct(ConstructArgs),
    /// Split a code's slots into equal-noise blocks and check each block's rate.
    Partition(PartitionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Pass if the code belongs to either family.
    Auto,
    /// No channel information at the relays.
    Dostbc,
    /// Row-monomial codes with channel phase information.
    Cpi,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub code: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub family: FamilyArg,
    /// Channel draws for the noise-weighted conditions.
    #[arg(long, default_value_t = 20, env = "DSTBC_DRAWS")]
    pub draws: usize,
    /// Relative tolerance of the numeric checks.
    #[arg(long, default_value_t = 1e-9, env = "DSTBC_TOL")]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, required_unless_present = "code")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "code")]
    pub k: Option<usize>,
    /// Also report the rate of this code against both bounds.
    #[arg(long)]
    pub code: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StructureArg {
    Cpi,
    Dostbc,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Key=value or JSON file with search keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// A shipped search space (see --list-presets).
    #[arg(long)]
    pub preset: Option<String>,
    /// Run every shipped search preset.
    #[arg(long, conflicts_with = "preset")]
    pub all_presets: bool,
    #[arg(long)]
    pub list_presets: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Sweep T = 1..=t_max and report the best rate.
    #[arg(long, conflicts_with = "t")]
    pub t_max: Option<usize>,
    #[arg(long, value_enum)]
    pub structure: Option<StructureArg>,
    /// Enumerate one representative per equivalence class.
    #[arg(long)]
    pub canonical: bool,
    /// Maximum raw candidate count.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Report progress every 10^6 raw candidates.
    #[arg(long)]
    pub progress: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Key=value or JSON file with simulation keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// fig1-trend, fig2-trend or diversity-slope.
    #[arg(long)]
    pub preset: Option<String>,
    /// Comma-separated SNR-per-bit points in dB.
    #[arg(long)]
    pub snr_db: Option<String>,
    #[arg(long)]
    pub min_trials: Option<u64>,
    #[arg(long)]
    pub min_bit_errors: Option<u64>,
    #[arg(long)]
    pub max_trials: Option<u64>,
    /// Disable relay and destination noise.
    #[arg(long)]
    pub noiseless: bool,
    /// Validate and print the resolved configuration without simulating.
    #[arg(long)]
    pub dry_run: bool,
    /// Write a companion plot script next to the output file.
    #[arg(long, requires = "out")]
    pub plot: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructFamily {
    Alamouti,
    RateHalving,
    Repetition,
    PairwiseAlamouti,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub family: ConstructFamily,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    pub code: PathBuf,
    #[arg(long, default_value_t = 20, env = "DSTBC_DRAWS")]
    pub draws: usize,
    #[arg(long, default_value_t = 1e-9, env = "DSTBC_TOL")]
    pub tol: f64,
}
