//! Verification ledger: one entry per identity check.

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::exact::rational::to_ratio_string;
use crate::json::CyclotomicJson;
use crate::params::ChainParams;
use crate::CyclotomicNumber;

/// What a check measured when comparing two sides.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Exact field-element difference (zero iff the identity holds).
    Exact(CyclotomicNumber),
    /// Exact rational difference.
    Rational(BigRational),
    /// Numeric gap, as `log2` of its magnitude plus a decimal rendering.
    Numeric { log2: f64, decimal: String },
    /// Structured checks with no single residual value.
    None,
}

impl Residual {
    pub fn numeric(log2: f64, decimal: impl Into<String>) -> Self {
        Residual::Numeric {
            log2,
            decimal: decimal.into(),
        }
    }

    /// `log2` of a numeric gap.
    pub fn log2(&self) -> Option<f64> {
        match self {
            Residual::Numeric { log2, .. } => Some(*log2),
            _ => None,
        }
    }

    /// JSON rendering; exact field elements use the cyclotomic schema.
    pub fn to_json(&self, precision_bits: usize) -> ResidualJson {
        match self {
            Residual::Exact(c) => {
                ResidualJson::Cyclotomic(CyclotomicJson::from_number(c, precision_bits))
            }
            Residual::Rational(q) => ResidualJson::Rational(to_ratio_string(q)),
            Residual::Numeric { log2, decimal } => ResidualJson::Numeric {
                log2: *log2,
                decimal: decimal.clone(),
            },
            Residual::None => ResidualJson::None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ResidualJson {
    Cyclotomic(CyclotomicJson),
    Rational(String),
    Numeric { log2: f64, decimal: String },
    None,
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub check_name: String,
    pub l: Option<u32>,
    pub n: Option<u32>,
    pub pass: bool,
    pub residual: Residual,
    pub detail: String,
}

impl CheckEntry {
    pub fn new(
        check_name: &str,
        pass: bool,
        residual: Residual,
        detail: impl Into<String>,
    ) -> Self {
        CheckEntry {
            check_name: check_name.to_string(),
            l: None,
            n: None,
            pass,
            residual,
            detail: detail.into(),
        }
    }

    pub fn at(mut self, params: &ChainParams) -> Self {
        self.l = Some(params.l());
        self.n = Some(params.n());
        self
    }

    pub fn at_l(mut self, l: u32) -> Self {
        self.l = Some(l);
        self
    }
}

impl fmt::Display for CheckEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}", self.check_name)?;
        match (self.l, self.n) {
            (Some(l), Some(n)) => write!(f, " (L={l}, N={n})")?,
            (Some(l), None) => write!(f, " (L={l})")?,
            _ => {}
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, es: impl IntoIterator<Item = CheckEntry>) {
        self.entries.extend(es);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    /// Orders entries by `(L, N, check name)` so reports are independent of
    /// job completion order.
    pub fn sort(&mut self) {
        self.entries
            .sort_by(|a, b| (a.l, a.n, &a.check_name).cmp(&(b.l, b.n, &b.check_name)));
    }
}
