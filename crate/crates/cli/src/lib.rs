//! Library side of the `qchain` command: argument parsing, run
//! configuration, record formats and the three subcommands.

pub mod args;
pub mod config;
pub mod records;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex;
use qchain::exact::rational::format_decimal;
use qchain::numeric::embed;
use qchain::suite::{compute_grid, verify_grid, Grid};
use qchain::{BigReal, CyclotomicNumber, RealScalar};

use args::{Cli, Command, Format};
use config::RunConfig;
use records::{ComputeDocument, VerifyDocument};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Internal(_) | CliError::Io { .. } => 3,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Config("--jobs must be ≥ 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(internal)?;
    let prec = cli.precision_bits;
    pool.install(|| match &cli.command {
        Command::Compute(g) => cmd_compute(&RunConfig::new(g, prec, None)?),
        Command::Verify(v) => cmd_verify(&RunConfig::new(&v.grid, prec, Some(&v.checks))?),
        Command::Table(g) => cmd_table(&RunConfig::new(g, prec, None)?),
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Computes the grid and insists that both builders agree when both ran.
fn grid_for(cfg: &RunConfig) -> Result<Grid, CliError> {
    let grid = compute_grid(&cfg.grid_spec()?).map_err(internal)?;
    if let Some(p) = grid
        .points
        .iter()
        .find(|p| p.method_agreement == Some(false))
    {
        return Err(CliError::Internal(format!(
            "closed form and linear system disagree at L={}, N={}",
            p.params.l(),
            p.params.n()
        )));
    }
    for (l, sc) in &grid.constants {
        if let Err(e) = sc {
            eprintln!("warning: no spin constant for L={l}: {e}");
        }
    }
    Ok(grid)
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = grid_for(cfg)?;
    let doc = ComputeDocument::from_grid(&grid, cfg.precision_bits);
    let text = match cfg.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv().map_err(internal)?,
    };
    emit(cfg.output_path.as_deref(), &text)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = compute_grid(&cfg.grid_spec()?).map_err(internal)?;
    let report = verify_grid(&grid, &cfg.checks, cfg.precision_bits);
    let requested = cfg.checks.iter().map(|c| c.to_string()).collect();
    let doc = VerifyDocument::new(
        &report,
        requested,
        &cfg.method.to_string(),
        cfg.precision_bits,
    );
    let text = match cfg.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv().map_err(internal)?,
    };
    emit(cfg.output_path.as_deref(), &text)?;
    for e in report.failures() {
        eprintln!("{e}");
    }
    eprintln!("{} checks, {} failed", doc.total, doc.failed);
    if doc.all_pass {
        Ok(())
    } else {
        Err(CliError::ChecksFailed {
            failed: doc.failed,
            total: doc.total,
        })
    }
}

const TABLE_DIGITS: usize = 20;

fn decimal(c: &CyclotomicNumber, prec: usize) -> String {
    let z: Complex<BigReal> = embed(c, prec);
    format_decimal(&z.re.to_rational(), TABLE_DIGITS)
}

pub fn render_table(grid: &Grid, prec: usize) -> String {
    let w = TABLE_DIGITS + 6;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3} {:>3} {:>4} {:>4}  {:>w$}  {:>w$}  {:>w$}",
        "L", "N", "M", "p", "E1 = sum w_j", "energy", "energy/M"
    );
    let mut last_l = None;
    for pt in grid.requested() {
        let s = &pt.result.summary;
        if last_l.is_some_and(|l| l != pt.params.l()) {
            out.push('\n');
        }
        last_l = Some(pt.params.l());
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>4} {:>4}  {:>w$}  {:>w$}  {:>w$}",
            pt.params.l(),
            pt.params.n(),
            pt.params.sites(),
            pt.params.roots(),
            decimal(&s.e1, prec),
            decimal(&s.energy, prec),
            decimal(&s.energy_per_site, prec),
        );
    }
    out
}

pub fn cmd_table(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = grid_for(cfg)?;
    emit(
        cfg.output_path.as_deref(),
        &render_table(&grid, cfg.precision_bits),
    )
}
