use std::collections::BTreeSet;
use std::path::PathBuf;

use qchain::qop::Method;
use qchain::roots::MIN_PRECISION_BITS;
use qchain::suite::{parse_checks, Check, GridSpec, Perturbation};

use crate::args::{Format, GridArgs};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub l_list: Vec<u32>,
    pub n_max: u32,
    pub method: Method,
    pub precision_bits: usize,
    pub checks: BTreeSet<Check>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub perturb: Option<Perturbation>,
}

impl RunConfig {
    pub fn new(
        grid: &GridArgs,
        precision_bits: usize,
        checks: Option<&str>,
    ) -> Result<Self, CliError> {
        if grid.l.is_empty() {
            return Err(CliError::Config("at least one L is required".into()));
        }
        if let Some(bad) = grid.l.iter().find(|&&l| l < 3 || l % 2 == 0) {
            return Err(CliError::Config(format!("L must be odd ≥ 3 (got {bad})")));
        }
        if grid.n_max < 1 {
            return Err(CliError::Config("N-max must be ≥ 1".into()));
        }
        if precision_bits < MIN_PRECISION_BITS {
            return Err(CliError::Config(format!(
                "precision must be ≥ {MIN_PRECISION_BITS} bits (got {precision_bits})"
            )));
        }
        let checks = match checks {
            Some(s) => parse_checks(s).map_err(|e| CliError::Config(e.to_string()))?,
            None => BTreeSet::new(),
        };
        let perturb = grid
            .perturb
            .as_deref()
            .map(str::parse::<Perturbation>)
            .transpose()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(RunConfig {
            l_list: grid.l.clone(),
            n_max: grid.n_max,
            method: grid.method.into(),
            precision_bits,
            checks,
            output_path: grid.output.clone(),
            format: grid.format,
            perturb,
        })
    }

    pub fn grid_spec(&self) -> Result<GridSpec, CliError> {
        Ok(GridSpec::new(self.l_list.clone(), self.n_max, self.method)
            .map_err(|e| CliError::Config(e.to_string()))?
            .with_perturbation(self.perturb.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    use crate::args::{Cli, Command};

    fn config(argv: &[&str]) -> Result<RunConfig, CliError> {
        let cli =
            Cli::try_parse_from(std::iter::once("qchain").chain(argv.iter().copied())).unwrap();
        match &cli.command {
            Command::Verify(v) => RunConfig::new(&v.grid, cli.precision_bits, Some(&v.checks)),
            Command::Compute(g) | Command::Table(g) => RunConfig::new(g, cli.precision_bits, None),
        }
    }

    #[test]
    fn defaults_cover_the_standard_grid() {
        let c = config(&["verify"]).unwrap();
        assert_eq!(c.l_list, [3, 5, 7, 9, 11]);
        assert_eq!(c.n_max, 4);
        assert_eq!(c.checks.len(), 6);
        assert_eq!(c.method, Method::ClosedForm);
        assert!(c.perturb.is_none());
    }

    #[test]
    fn rejects_bad_values_as_config_errors() {
        for argv in [
            &["compute", "--L", "3,6"][..],
            &["compute", "--N-max", "0"],
            &["compute", "--precision-bits", "127"],
            &["verify", "--checks", "tq,unknown"],
            &["compute", "--perturb", "2"],
        ] {
            let e = config(argv).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{argv:?}");
        }
    }

    #[test]
    fn parses_lists_and_hook() {
        let c = config(&[
            "verify",
            "--L",
            "5,3",
            "--checks",
            "tq,roots",
            "--perturb",
            "0:-1/2",
            "--method",
            "both",
        ])
        .unwrap();
        assert_eq!(c.l_list, [5, 3]);
        assert_eq!(c.checks.len(), 2);
        assert_eq!(c.method, Method::Both);
        assert_eq!(c.perturb.unwrap().k, 0);
        let spec = config(&["compute", "--L", "5,3"])
            .unwrap()
            .grid_spec()
            .unwrap();
        assert_eq!(spec.ls, [3, 5]);
    }
}
