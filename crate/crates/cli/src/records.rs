//! On-disk forms of computed runs and verification reports.

use serde::{Deserialize, Serialize};

use qchain::exact::rational::{report_digits, to_ratio_string};
use qchain::json::{approx_string, CyclotomicJson};
use qchain::report::ResidualJson;
use qchain::suite::Grid;
use qchain::{CheckEntry, VerificationReport};

pub const SCHEMA_SUM_RANGE: &str = "p";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub precision_bits: usize,
    /// The energy sums run over the `p` Bethe roots.
    pub resolved_sum_range: String,
    pub command: String,
    pub method: String,
}

impl Meta {
    pub fn new(command: &str, method: &str, precision_bits: usize) -> Self {
        Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            precision_bits,
            resolved_sum_range: SCHEMA_SUM_RANGE.to_string(),
            command: command.to_string(),
            method: method.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub p: usize,
    pub spin: String,
    /// `e_0 .. e_p` with `Q(z) = sum_k (-1)^k e_k z^(p-k)`
    pub e: Vec<String>,
    #[serde(rename = "E1")]
    pub e1: CyclotomicJson,
    pub energy: CyclotomicJson,
    pub energy_per_site: CyclotomicJson,
    /// Spin constant for this L, from N = 1 and N = 2.
    #[serde(rename = "A")]
    pub a: Option<CyclotomicJson>,
    /// `2A + cos(2 pi/L)`
    pub slope: Option<CyclotomicJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputeDocument {
    pub meta: Meta,
    pub runs: Vec<RunRecord>,
}

impl ComputeDocument {
    pub fn from_grid(grid: &Grid, precision_bits: usize) -> Self {
        let cyc = |c| CyclotomicJson::from_number(c, precision_bits);
        let runs = grid
            .requested()
            .map(|pt| {
                let params = pt.params;
                let s = &pt.result.summary;
                let sc = grid
                    .constants
                    .get(&params.l())
                    .and_then(|r| r.as_ref().ok());
                RunRecord {
                    l: params.l(),
                    n: params.n(),
                    m: params.sites(),
                    p: params.roots(),
                    spin: to_ratio_string(&params.spin()),
                    e: pt.result.q.e().iter().map(to_ratio_string).collect(),
                    e1: cyc(&s.e1),
                    energy: cyc(&s.energy),
                    energy_per_site: cyc(&s.energy_per_site),
                    a: sc.map(|sc| cyc(&sc.a)),
                    slope: sc.map(|sc| cyc(&sc.slope)),
                }
            })
            .collect();
        ComputeDocument {
            meta: Meta::new("compute", &grid.spec.method.to_string(), precision_bits),
            runs,
        }
    }

    /// Regenerates every decimal from the exact fields at the document's
    /// precision.
    pub fn refresh_decimals(&mut self) -> qchain::Result<()> {
        let prec = self.meta.precision_bits;
        let refresh = |c: &mut CyclotomicJson| -> qchain::Result<()> {
            c.approx = approx_string(&c.to_number()?, prec);
            Ok(())
        };
        for r in &mut self.runs {
            refresh(&mut r.e1)?;
            refresh(&mut r.energy)?;
            refresh(&mut r.energy_per_site)?;
            if let Some(a) = r.a.as_mut() {
                refresh(a)?;
            }
            if let Some(s) = r.slope.as_mut() {
                refresh(s)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "L",
            "N",
            "M",
            "p",
            "E1",
            "energy",
            "energy_per_site",
            "A",
            "slope",
        ])?;
        for r in &self.runs {
            let opt =
                |c: &Option<CyclotomicJson>| c.as_ref().map_or(String::new(), |c| c.approx.clone());
            w.write_record([
                r.l.to_string(),
                r.n.to_string(),
                r.m.to_string(),
                r.p.to_string(),
                r.e1.approx.clone(),
                r.energy.approx.clone(),
                r.energy_per_site.approx.clone(),
                opt(&r.a),
                opt(&r.slope),
            ])?;
        }
        csv_with_banner(w, self.meta.precision_bits)
    }
}

fn csv_with_banner(w: csv::Writer<Vec<u8>>, precision_bits: usize) -> Result<String, csv::Error> {
    let body =
        String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8");
    Ok(format!(
        "# decimals derived from exact values, {} significant digits ({precision_bits}-bit evaluation)\n{body}",
        report_digits(precision_bits)
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(rename = "L")]
    pub l: Option<u32>,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub pass: bool,
    pub residual: ResidualJson,
    pub detail: String,
}

impl CheckRecord {
    fn new(e: &CheckEntry, precision_bits: usize) -> Self {
        CheckRecord {
            check: e.check_name.clone(),
            l: e.l,
            n: e.n,
            pass: e.pass,
            residual: e.residual.to_json(precision_bits),
            detail: e.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyDocument {
    pub meta: Meta,
    pub checks_requested: Vec<String>,
    pub all_pass: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
}

impl VerifyDocument {
    pub fn new(
        report: &VerificationReport,
        requested: Vec<String>,
        method: &str,
        precision_bits: usize,
    ) -> Self {
        VerifyDocument {
            meta: Meta::new("verify", method, precision_bits),
            checks_requested: requested,
            all_pass: report.all_pass(),
            total: report.entries.len(),
            failed: report.failures().count(),
            checks: report
                .entries
                .iter()
                .map(|e| CheckRecord::new(e, precision_bits))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "L", "N", "pass", "residual_log2", "detail"])?;
        for c in &self.checks {
            let log2 = match &c.residual {
                ResidualJson::Numeric { log2, .. } => format!("{log2:.1}"),
                _ => String::new(),
            };
            let o = |v: Option<u32>| v.map_or(String::new(), |v| v.to_string());
            w.write_record([
                c.check.clone(),
                o(c.l),
                o(c.n),
                c.pass.to_string(),
                log2,
                c.detail.clone(),
            ])?;
        }
        csv_with_banner(w, self.meta.precision_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qchain::qop::Method;
    use qchain::suite::{compute_grid, parse_checks, verify_grid, GridSpec};

    fn grid() -> Grid {
        compute_grid(&GridSpec::new(vec![3, 5], 2, Method::ClosedForm).unwrap()).unwrap()
    }

    #[test]
    fn compute_document_shape() {
        let doc = ComputeDocument::from_grid(&grid(), 128);
        assert_eq!(doc.runs.len(), 4);
        let r = &doc.runs[2];
        assert_eq!((r.l, r.n, r.m, r.p), (5, 1, 3, 4));
        assert_eq!(r.spin, "3/2");
        assert_eq!(r.e.len(), 5);
        assert_eq!(r.e1.order, 10);
        assert!(r
            .energy_per_site
            .approx
            .starts_with("-2.6180339887498948482045868343656"));
    }

    #[test]
    fn refresh_is_idempotent() {
        let mut doc = ComputeDocument::from_grid(&grid(), 192);
        let before = doc.to_json();
        doc.refresh_decimals().unwrap();
        assert_eq!(doc.to_json(), before);
    }

    #[test]
    fn verify_csv_quotes_details() {
        let g = grid();
        let report = verify_grid(&g, &parse_checks("structure").unwrap(), 128);
        let doc = VerifyDocument::new(&report, vec!["structure".into()], "closed-form", 128);
        assert!(doc.all_pass);
        let csv = doc.to_csv().unwrap();
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), doc.total);
        assert!(rows.iter().all(|r| r.len() == 6 && &r[3] == "true"));
    }
}
