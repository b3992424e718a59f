use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "qchain",
    version,
    about = "Exact groundstate energies of the higher-spin XXZ chain at the combinatorial point"
)]
pub struct Cli {
    /// Precision of decimal renderings and of the numeric root checks
    #[arg(long, global = true, env = "QCHAIN_PRECISION_BITS", default_value_t = qchain::DEFAULT_PRECISION_BITS)]
    pub precision_bits: usize,

    /// Worker threads for the (L, N) grid; defaults to the number of cores
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build Q, transform to w and write E1, the energy and A for each grid point
    Compute(GridArgs),
    /// Run identity checks over the grid; exit status 1 if any fails
    Verify(VerifyArgs),
    /// Print a table showing the energy per site for each grid point
    Table(GridArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    ClosedForm,
    LinearSystem,
    Both,
}

impl From<MethodArg> for qchain::qop::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => qchain::qop::Method::ClosedForm,
            MethodArg::LinearSystem => qchain::qop::Method::LinearSystem,
            MethodArg::Both => qchain::qop::Method::Both,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Odd values of L = 2s + 2 (comma separated)
    #[arg(
        long = "L",
        visible_alias = "l",
        value_delimiter = ',',
        default_value = "3,5,7,9,11"
    )]
    pub l: Vec<u32>,

    /// Largest N; the chain has M = 2N + 1 sites
    #[arg(long = "N-max", visible_alias = "n-max", default_value_t = 4)]
    pub n_max: u32,

    #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
    pub method: MethodArg,

    /// Write here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Add a rational to one coefficient of every Q ("k:delta"); negative control
    #[arg(long, hide = true)]
    pub perturb: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// "all" or a comma list of: structure, tq, linearity, finite-size, section4, roots
    #[arg(long, default_value = "all")]
    pub checks: String,
}
