//! Library half of the `hilbert` command: argument definitions, point file
//! formats, gene-table cache resolution and the subcommands themselves.

pub mod commands;
pub mod points;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Environment variable that overrides the gene-table cache directory.
pub const CACHE_ENV: &str = "HILBERT_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "hilbert", version, about = "Hilbert order in any dimension")]
pub struct Cli {
    /// Build gene tables in memory instead of using the on-disk cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Gene-table cache directory (default: $HILBERT_CACHE_DIR, then the
    /// platform cache directory).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map coordinates to Hilbert indices.
    Encode(EncodeArgs),
    /// Map Hilbert indices to coordinates.
    Decode(DecodeArgs),
    /// Reorder a point file along the curve.
    Sort(SortArgs),
    /// Build, dump or export the gene table of a dimension.
    Gene(GeneArgs),
    /// Check curve properties for a range of levels.
    Validate(ValidateArgs),
    /// Report loop counts and timings of all eight algorithms.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Dimension n (at least 2).
    #[arg(long = "dim", short = 'n')]
    pub dim: u32,
    /// Level m; components lie in [0, 2^m).
    #[arg(long = "level", short = 'm')]
    pub level: u32,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Encoder: 1 and 2 loop over every level, 3 and 4 start at the
    /// point's effective level; odd numbers use arithmetic, even use bit
    /// operations.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub algo: u8,
    /// Always print indices as radix-2^n digit strings.
    #[arg(long)]
    pub digits: bool,
    /// Read points from a text or binary point file.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Coordinates, x_n first; several points may be given back to back.
    #[arg(value_name = "COORD", allow_hyphen_values = true)]
    pub coords: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Decoder: 5-8, or 1-4 for the decoder paired with that encoder.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u8).range(1..=8))]
    pub algo: u8,
    /// Read indices from a file, one per line.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Indices, decimal or `h<n>:<r_m>.….<r_1>`.
    #[arg(value_name = "INDEX")]
    pub indices: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FileFormat {
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct SortArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub algo: u8,
    /// Point file to sort (text or binary, detected by content).
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Destination; `-` writes to standard output.
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    /// Output format (default: same as input).
    #[arg(long, value_enum)]
    pub output_format: Option<FileFormat>,
}

#[derive(Debug, Args)]
pub struct GeneArgs {
    #[arg(long = "dim", short = 'n')]
    pub dim: u32,
    /// Print one row per quadrant: exchange and reverse commands.
    #[arg(long)]
    pub dump_text: bool,
    /// Also write the binary table to this file.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Rebuild the cached table even if it is valid.
    #[arg(long)]
    pub rebuild: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long = "dim", short = 'n')]
    pub dim: u32,
    #[arg(long, default_value_t = 1)]
    pub min_level: u32,
    #[arg(long)]
    pub max_level: u32,
    /// Largest n·level checked exhaustively (at most 24); deeper levels
    /// are sampled.
    #[arg(long, default_value_t = 18, value_parser = clap::value_parser!(u64).range(0..=24))]
    pub exhaustive_bits: u64,
    /// Random points per sampled level.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Emit key=value records instead of text.
    #[arg(long)]
    pub records: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Point, x_n first, comma separated.
    #[arg(long, default_value = "1,1,1")]
    pub point: String,
    /// Comma-separated levels.
    #[arg(long, default_value = "8,32,128,256")]
    pub levels: String,
    /// Timed batches per measurement.
    #[arg(long, default_value_t = 31)]
    pub samples: usize,
    #[arg(long)]
    pub records: bool,
}
