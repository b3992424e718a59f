//! Grid driver: runs the exact pipeline over `(L, N)` points in parallel and
//! collects the requested checks into a single ordered report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::energy::{
    finite_size_entries, linearity_entries, pipeline_from_q, printed_form_entries,
    spin_constant_from, PipelineResult, SpinConstant, WSummary,
};
use crate::error::{Error, Result};
use crate::exact::rational::parse_ratio;
use crate::params::ChainParams;
use crate::qop::{
    build_q, q_closed_form, q_linear_system, verify_structure, verify_tq_identity, Method,
    QPolynomial,
};
use crate::report::{CheckEntry, Residual, VerificationReport};
use crate::roots::verify_roots;
use crate::wtransform::{verify_e1_paths, verify_inverse_sum, verify_reality};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Structure,
    Tq,
    Linearity,
    FiniteSize,
    PrintedForms,
    Roots,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Structure,
        Check::Tq,
        Check::Linearity,
        Check::FiniteSize,
        Check::PrintedForms,
        Check::Roots,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Structure => "structure",
            Check::Tq => "tq",
            Check::Linearity => "linearity",
            Check::FiniteSize => "finite-size",
            Check::PrintedForms => "section4",
            Check::Roots => "roots",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

/// `"all"` or a comma-separated list of check names.
pub fn parse_checks(s: &str) -> Result<BTreeSet<Check>> {
    if s.trim() == "all" {
        return Ok(Check::ALL.into_iter().collect());
    }
    let set = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(Check::from_str)
        .collect::<Result<BTreeSet<_>>>()?;
    if set.is_empty() {
        return Err(Error::Parse("no checks selected".into()));
    }
    Ok(set)
}

/// Adds `delta` to one `e_k` of every Q after it is built. Used as a negative
/// control: a genuine Q must stop satisfying the identities.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub k: usize,
    pub delta: BigRational,
}

impl FromStr for Perturbation {
    type Err = Error;
    /// `"k:delta"`, e.g. `"1:1/1000"`.
    fn from_str(s: &str) -> Result<Self> {
        let (k, d) = s.split_once(':').ok_or_else(|| {
            Error::Parse(format!("perturbation {s:?} is not of the form k:delta"))
        })?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in perturbation {s:?}")))?;
        let delta = parse_ratio(d.trim())?;
        if delta.is_zero() {
            return Err(Error::Parse("perturbation delta must be nonzero".into()));
        }
        Ok(Perturbation { k, delta })
    }
}

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub ls: Vec<u32>,
    pub n_max: u32,
    pub method: Method,
    pub perturb: Option<Perturbation>,
}

impl GridSpec {
    pub fn new(ls: Vec<u32>, n_max: u32, method: Method) -> Result<Self> {
        if ls.is_empty() {
            return Err(Error::InvalidParams("the L list is empty".into()));
        }
        if n_max < 1 {
            return Err(Error::InvalidParams(format!(
                "N_max must be >= 1, got {n_max}"
            )));
        }
        for &l in &ls {
            ChainParams::new(l, 1)?;
        }
        let mut ls = ls;
        ls.sort_unstable();
        ls.dedup();
        Ok(GridSpec {
            ls,
            n_max,
            method,
            perturb: None,
        })
    }

    pub fn with_perturbation(mut self, p: Option<Perturbation>) -> Self {
        self.perturb = p;
        self
    }

    /// Points actually computed: `N` runs to at least 2 so that `A` can be
    /// extracted for every `L`.
    fn computed_params(&self) -> Vec<ChainParams> {
        let top = self.n_max.max(2);
        self.ls
            .iter()
            .flat_map(|&l| (1..=top).map(move |n| ChainParams::new(l, n).expect("validated")))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct GridPoint {
    pub params: ChainParams,
    pub result: PipelineResult,
    /// `Some(equal)` when both builders ran.
    pub method_agreement: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub spec: GridSpec,
    /// Ordered by `(L, N)`.
    pub points: Vec<GridPoint>,
    pub constants: BTreeMap<u32, std::result::Result<SpinConstant, Error>>,
}

impl Grid {
    /// Points with `N <= N_max`.
    pub fn requested(&self) -> impl Iterator<Item = &GridPoint> {
        self.points
            .iter()
            .filter(|p| p.params.n() <= self.spec.n_max)
    }

    fn series(&self, l: u32, n_max: u32) -> Vec<WSummary> {
        self.points
            .iter()
            .filter(|p| p.params.l() == l && p.params.n() <= n_max)
            .map(|p| p.result.summary.clone())
            .collect()
    }
}

fn build_point(params: ChainParams, spec: &GridSpec) -> Result<GridPoint> {
    let (q, agreement): (QPolynomial, Option<bool>) = match spec.method {
        Method::Both => {
            let a = q_closed_form(params)?;
            let b = q_linear_system(params)?;
            let same = a == b;
            (a, Some(same))
        }
        m => (build_q(params, m)?, None),
    };
    let q = match &spec.perturb {
        Some(p) => q.perturbed(p.k, &p.delta)?,
        None => q,
    };
    Ok(GridPoint {
        params,
        result: pipeline_from_q(q)?,
        method_agreement: agreement,
    })
}

/// Runs every grid point (in parallel on the current rayon pool) and
/// extracts `A` per `L` from `N = 1, 2`.
pub fn compute_grid(spec: &GridSpec) -> Result<Grid> {
    let points = spec
        .computed_params()
        .into_par_iter()
        .map(|params| build_point(params, spec))
        .collect::<Result<Vec<_>>>()?;
    let mut constants = BTreeMap::new();
    for &l in &spec.ls {
        let at = |n: u32| {
            points
                .iter()
                .find(|p| p.params.l() == l && p.params.n() == n)
                .map(|p| &p.result.summary.e1)
                .expect("N = 1, 2 are always computed")
        };
        constants.insert(l, spin_constant_from(l, at(1), at(2)));
    }
    Ok(Grid {
        spec: spec.clone(),
        points,
        constants,
    })
}

fn point_entries(
    point: &GridPoint,
    checks: &BTreeSet<Check>,
    precision_bits: usize,
) -> Vec<CheckEntry> {
    let q = &point.result.q;
    let ws = &point.result.ws;
    let mut out = Vec::new();
    if checks.contains(&Check::Structure) {
        out.push(verify_structure(q));
        out.push(verify_reality(q));
        out.push(verify_e1_paths(q, ws));
        out.push(verify_inverse_sum(q));
        if let Some(same) = point.method_agreement {
            let detail = if same {
                "closed form and linear system give identical e_k"
            } else {
                "closed form and linear system differ"
            };
            out.push(
                CheckEntry::new("method-agreement", same, Residual::None, detail).at(&point.params),
            );
        }
    }
    if checks.contains(&Check::Tq) {
        out.push(verify_tq_identity(q));
    }
    if checks.contains(&Check::Roots) {
        out.extend(verify_roots(q, ws, precision_bits));
    }
    out
}

/// Evaluates the selected checks over a computed grid.
pub fn verify_grid(
    grid: &Grid,
    checks: &BTreeSet<Check>,
    precision_bits: usize,
) -> VerificationReport {
    let per_point: Vec<Vec<CheckEntry>> = grid
        .requested()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|p| point_entries(p, checks, precision_bits))
        .collect();
    let mut report = VerificationReport::new();
    report.extend(per_point.into_iter().flatten());

    for &l in &grid.spec.ls {
        let series = grid.series(l, grid.spec.n_max);
        let wants_law = checks.contains(&Check::Linearity) || checks.contains(&Check::FiniteSize);
        match &grid.constants[&l] {
            Ok(sc) => {
                if checks.contains(&Check::Linearity) {
                    report.extend(linearity_entries(sc, &series));
                }
                if checks.contains(&Check::FiniteSize) {
                    report.extend(finite_size_entries(sc, &series));
                }
            }
            Err(e) if wants_law => {
                report.push(
                    CheckEntry::new("spin-constant", false, Residual::None, e.to_string()).at_l(l),
                );
            }
            Err(_) => {}
        }
        if checks.contains(&Check::PrintedForms) {
            report.extend(printed_form_entries(l, &grid.series(l, 2), precision_bits));
        }
    }
    report.sort();
    report
}

pub fn run_verification(
    spec: &GridSpec,
    checks: &BTreeSet<Check>,
    precision_bits: usize,
) -> Result<VerificationReport> {
    Ok(verify_grid(&compute_grid(spec)?, checks, precision_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn parses_checks() {
        assert_eq!(parse_checks("all").unwrap().len(), 6);
        let s = parse_checks("tq, roots").unwrap();
        assert!(s.contains(&Check::Tq) && s.contains(&Check::Roots) && s.len() == 2);
        assert!(parse_checks("tq,bogus").is_err());
        assert!(parse_checks("").is_err());
    }

    #[test]
    fn parses_perturbation() {
        let p: Perturbation = "1:1/1000".parse().unwrap();
        assert_eq!(
            p,
            Perturbation {
                k: 1,
                delta: rat(1, 1000)
            }
        );
        assert!("1:0".parse::<Perturbation>().is_err());
        assert!("x".parse::<Perturbation>().is_err());
    }

    #[test]
    fn rejects_even_l() {
        assert!(matches!(
            GridSpec::new(vec![3, 4], 2, Method::ClosedForm),
            Err(Error::InvalidParams(_))
        ));
        assert!(GridSpec::new(vec![], 2, Method::ClosedForm).is_err());
        assert!(GridSpec::new(vec![3], 0, Method::ClosedForm).is_err());
    }

    #[test]
    fn small_grid_passes_everything() {
        let spec = GridSpec::new(vec![5, 3], 3, Method::Both).unwrap();
        let grid = compute_grid(&spec).unwrap();
        let order: Vec<(u32, u32)> = grid
            .points
            .iter()
            .map(|p| (p.params.l(), p.params.n()))
            .collect();
        assert_eq!(order, vec![(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)]);
        let report = verify_grid(&grid, &parse_checks("all").unwrap(), 256);
        for e in &report.entries {
            assert!(e.pass, "{e}");
        }
        assert!(report
            .entries
            .iter()
            .any(|e| e.check_name == "method-agreement"));
    }

    #[test]
    fn perturbation_fails_tq_and_roots() {
        let spec = GridSpec::new(vec![5], 2, Method::ClosedForm)
            .unwrap()
            .with_perturbation(Some("1:1/7".parse().unwrap()));
        let report = run_verification(&spec, &parse_checks("tq,roots").unwrap(), 256).unwrap();
        assert!(!report.all_pass());
        assert!(report.failures().any(|e| e.check_name == "tq"));
        assert!(report
            .failures()
            .any(|e| e.check_name.starts_with("roots-bae")));
    }
}
