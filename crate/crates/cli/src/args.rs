use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "itm", version, about = "Exact interval translation maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a map of at most three pieces to a double rotation or rotation.
    Reduce(ReduceArgs),
    /// Decide finite type by iterating the image of [0, 1).
    Detect(DetectArgs),
    /// Run a seeded sampling campaign over three-piece maps on a 1/q grid.
    Sample(SampleArgs),
    /// Draw a map as an SVG arc diagram.
    Render(RenderArgs),
}

#[derive(Debug, Args, Clone)]
pub struct BudgetArgs {
    /// Image iterations before giving up [default: 16 q].
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Give up once an image has more pieces than this.
    #[arg(long, default_value_t = itm_core::typing::DEFAULT_MAX_PIECES)]
    pub max_pieces: usize,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Map JSON file, or `-` for stdin.
    pub input: PathBuf,
    /// Print the stages as text instead of JSON.
    #[arg(long)]
    pub trace: bool,
    /// Print nothing; report through the exit code only.
    #[arg(long)]
    pub quiet: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Map JSON file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long)]
    pub quiet: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aggregate report.
    Json,
    /// One row per trial.
    Csv,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid denominator q.
    #[arg(long, default_value_t = 64)]
    pub den_bound: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub quiet: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Map JSON file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
