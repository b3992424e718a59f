//! Energy eigenvalue, the spin constant `A`, and the finite-size checks.
//!
//! With `p` Bethe roots and `sum_j w_j = sum_j 1/w_j`, the eigenvalue is
//! `E = p * 2cos(2pi/L) - 2 E_1`, where `2ch(2s eta) = 2cos(2pi/L)` at the
//! combinatorial point. The conjecture under test is
//! `E_1(N) = A + (2A + cos(2pi/L)) N`, equivalently
//! `E = ((L-3)cos(2pi/L) - 2A) M` with no finite-size correction.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::cyclotomic::{check_odd_l, CyclotomicField};
use crate::exact::rational::format_decimal;
use crate::numeric::{cabs, embed, RealScalar};
use crate::params::ChainParams;
use crate::qop::{build_q, Method, QPolynomial};
use crate::report::{CheckEntry, Residual};
use crate::wtransform::{w_sum, WSymmetrics};
use crate::{BigReal, CyclotomicNumber, RationalCyclotomicField};

#[derive(Clone, Debug)]
pub struct WSummary {
    pub params: ChainParams,
    pub e1: CyclotomicNumber,
    pub energy: CyclotomicNumber,
    pub energy_per_site: CyclotomicNumber,
}

/// `2ch(2s eta)` at `eta = -(L-1) pi i/L`, i.e. `2cos(2pi/L)`.
pub fn site_constant(field: &Arc<RationalCyclotomicField>) -> CyclotomicNumber {
    field
        .zeta_cos(2)
        .scale(&BigRational::from_integer(2.into()))
}

/// `cos(2pi/L)`
pub fn cos_two_pi_over_l(field: &Arc<RationalCyclotomicField>) -> CyclotomicNumber {
    field.zeta_cos(2)
}

pub fn energy(ws: &WSymmetrics) -> WSummary {
    let field = ws.e1.field().clone();
    let p = BigRational::from_integer(BigInt::from(ws.params.roots()));
    let two = BigRational::from_integer(2.into());
    let e = site_constant(&field).scale(&p) - ws.e1.scale(&two);
    let m = BigRational::from_integer(BigInt::from(ws.params.sites()));
    WSummary {
        params: ws.params,
        e1: ws.e1.clone(),
        energy_per_site: e.scale(&(BigRational::from_integer(1.into()) / m)),
        energy: e,
    }
}

/// One grid point carried through every exact stage.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub q: QPolynomial,
    pub ws: WSymmetrics,
    pub summary: WSummary,
}

pub fn run_pipeline(params: ChainParams, method: Method) -> Result<PipelineResult> {
    pipeline_from_q(build_q(params, method)?)
}

pub fn pipeline_from_q(q: QPolynomial) -> Result<PipelineResult> {
    let ws = w_sum(&q)?;
    let summary = energy(&ws);
    Ok(PipelineResult { q, ws, summary })
}

#[derive(Clone, Debug)]
pub struct SpinConstant {
    pub l: u32,
    pub a: CyclotomicNumber,
    /// `2A + cos(2pi/L)`
    pub slope: CyclotomicNumber,
}

impl SpinConstant {
    /// `(L-3)cos(2pi/L) - 2A`, the predicted energy per site.
    pub fn energy_density(&self) -> CyclotomicNumber {
        let field = self.a.field().clone();
        let l3 = BigRational::from_integer(BigInt::from(self.l as i64 - 3));
        cos_two_pi_over_l(&field).scale(&l3) - self.a.scale(&BigRational::from_integer(2.into()))
    }

    /// `A + slope * N`
    pub fn predict_e1(&self, n: u32) -> CyclotomicNumber {
        &self.a + &self.slope.scale(&BigRational::from_integer(n.into()))
    }
}

/// `A` and the slope from `E_1` at `N = 1, 2`; the slope must equal
/// `2A + cos(2pi/L)` exactly.
pub fn spin_constant_from(
    l: u32,
    e1_n1: &CyclotomicNumber,
    e1_n2: &CyclotomicNumber,
) -> Result<SpinConstant> {
    let slope = e1_n2.checked_sub(e1_n1)?;
    let a = e1_n1.checked_sub(&slope)?;
    let field = a.field().clone();
    let anchor = a.scale(&BigRational::from_integer(2.into())) + cos_two_pi_over_l(&field);
    let residual = &slope - &anchor;
    if !residual.is_zero() {
        return Err(Error::SlopeInconsistency {
            l,
            residual: format!("{residual:?}"),
        });
    }
    if !a.is_real() {
        return Err(Error::NotReal(format!("A for L={l}")));
    }
    Ok(SpinConstant { l, a, slope })
}

/// `extract_A`: runs the pipeline at `N = 1` and `N = 2`.
pub fn extract_a(l: u32, method: Method) -> Result<SpinConstant> {
    let one = run_pipeline(ChainParams::new(l, 1)?, method)?;
    let two = run_pipeline(ChainParams::new(l, 2)?, method)?;
    spin_constant_from(l, &one.summary.e1, &two.summary.e1)
}

/// `E_1(N) = A + slope N` for each supplied summary, plus constancy of the
/// first differences.
pub fn linearity_entries(sc: &SpinConstant, series: &[WSummary]) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    for s in series {
        let r = &s.e1 - &sc.predict_e1(s.params.n());
        let pass = r.is_zero();
        let detail = if pass {
            "E_1(N) = A + (2A + cos(2pi/L)) N exactly".to_string()
        } else {
            "E_1(N) deviates from the linear law".to_string()
        };
        out.push(CheckEntry::new("linearity", pass, Residual::Exact(r), detail).at(&s.params));
    }
    let mut sorted: Vec<&WSummary> = series.iter().collect();
    sorted.sort_by_key(|s| s.params.n());
    let diffs: Vec<CyclotomicNumber> = sorted
        .windows(2)
        .filter(|w| w[1].params.n() == w[0].params.n() + 1)
        .map(|w| &w[1].e1 - &w[0].e1)
        .collect();
    if let Some(first) = diffs.first() {
        let bad = diffs.iter().filter(|d| *d != first).count();
        let r = diffs
            .last()
            .map(|d| d - first)
            .unwrap_or_else(|| first.field().zero());
        out.push(
            CheckEntry::new(
                "first-differences",
                bad == 0,
                Residual::Exact(r),
                format!(
                    "{} consecutive differences, {bad} differ from the first",
                    diffs.len()
                ),
            )
            .at_l(sc.l),
        );
    }
    out
}

/// `E(N) = ((L-3)cos(2pi/L) - 2A)(2N+1)` and `E(N)/M = E(1)/3` for each
/// supplied summary.
pub fn finite_size_entries(sc: &SpinConstant, series: &[WSummary]) -> Vec<CheckEntry> {
    let density = sc.energy_density();
    let reference = series
        .iter()
        .find(|s| s.params.n() == 1)
        .map(|s| s.energy_per_site.clone());
    series
        .iter()
        .map(|s| {
            let m = BigRational::from_integer(BigInt::from(s.params.sites()));
            let r = &s.energy - &density.scale(&m);
            let same_density = reference.as_ref().is_none_or(|e| *e == s.energy_per_site);
            let pass = r.is_zero() && same_density;
            let detail = if pass {
                "energy = ((L-3)cos(2pi/L) - 2A) M, density independent of N".to_string()
            } else {
                "finite-size correction detected".to_string()
            };
            CheckEntry::new("finite-size", pass, Residual::Exact(r), detail).at(&s.params)
        })
        .collect()
}

fn series_for(l: u32, n_max: u32, method: Method) -> Result<Vec<WSummary>> {
    (1..=n_max)
        .map(|n| Ok(run_pipeline(ChainParams::new(l, n)?, method)?.summary))
        .collect()
}

/// `verify_linearity(L, N_max)`: `A` from `N = 1, 2`, then every `N <= N_max`.
pub fn verify_linearity(l: u32, n_max: u32) -> Result<Vec<CheckEntry>> {
    let series = series_for(l, n_max.max(2), Method::ClosedForm)?;
    let sc = spin_constant_from(l, &series[0].e1, &series[1].e1)?;
    Ok(linearity_entries(&sc, &series[..n_max as usize]))
}

pub fn verify_no_finite_size_correction(l: u32, n_max: u32) -> Result<Vec<CheckEntry>> {
    let series = series_for(l, n_max.max(2), Method::ClosedForm)?;
    let sc = spin_constant_from(l, &series[0].e1, &series[1].e1)?;
    Ok(finite_size_entries(&sc, &series[..n_max as usize]))
}

/// A trigonometric value `cos(a pi / b)` or `sin(a pi / b)`, or 1.
#[derive(Clone, Copy, Debug)]
enum Trig {
    One,
    Cos(i64, i64),
    Sin(i64, i64),
}

impl Trig {
    fn numeric<R: RealScalar>(self, prec: usize) -> R {
        let angle = |a: i64, b: i64| {
            R::pi_prec(prec) * R::from_i64_prec(a, prec) / R::from_i64_prec(b, prec)
        };
        match self {
            Trig::One => R::from_i64_prec(1, prec),
            Trig::Cos(a, b) => angle(a, b).cos(),
            Trig::Sin(a, b) => angle(a, b).sin(),
        }
    }

    /// The same value in `Q(zeta_{2L})`, using `sin(x) = cos(pi/2 - x)`.
    fn exact(self, field: &Arc<RationalCyclotomicField>, l: i64) -> Option<CyclotomicNumber> {
        // cos(pi * num / den) = zeta_cos(m) with m = num * L / den
        let cos_ratio = |num: i64, den: i64| -> Option<CyclotomicNumber> {
            ((num * l) % den == 0).then(|| field.zeta_cos(num * l / den))
        };
        match self {
            Trig::One => Some(field.one()),
            Trig::Cos(a, b) => cos_ratio(a, b),
            Trig::Sin(a, b) => cos_ratio(b - 2 * a, 2 * b),
        }
    }
}

/// `sum_i c_i t_i`
#[derive(Clone, Debug)]
struct Combination(Vec<(i64, Trig)>);

impl Combination {
    fn new(coeffs: &[i64], basis: &[Trig]) -> Self {
        Combination(coeffs.iter().copied().zip(basis.iter().copied()).collect())
    }

    fn numeric<R: RealScalar>(&self, prec: usize) -> R {
        self.0
            .iter()
            .fold(R::from_i64_prec(0, prec), |acc, (c, t)| {
                acc + R::from_i64_prec(*c, prec) * t.numeric::<R>(prec)
            })
    }

    fn exact(&self, field: &Arc<RationalCyclotomicField>, l: i64) -> Option<CyclotomicNumber> {
        self.0.iter().try_fold(field.zero(), |acc, (c, t)| {
            Some(
                acc + t
                    .exact(field, l)?
                    .scale(&BigRational::from_integer((*c).into())),
            )
        })
    }
}

/// `scale * num / den`
#[derive(Clone, Debug)]
struct Fraction {
    scale: i64,
    num: Combination,
    den: Combination,
}

impl Fraction {
    fn numeric<R: RealScalar>(&self, prec: usize) -> R {
        R::from_i64_prec(self.scale, prec) * self.num.numeric::<R>(prec)
            / self.den.numeric::<R>(prec)
    }

    fn exact(&self, field: &Arc<RationalCyclotomicField>, l: i64) -> Option<CyclotomicNumber> {
        let n = self.num.exact(field, l)?;
        let d = self.den.exact(field, l)?;
        Some(
            n.checked_div(&d)
                .ok()?
                .scale(&BigRational::from_integer(self.scale.into())),
        )
    }
}

/// Known trigonometric closed forms `sum_j w_j = (N-1) F_1 + (2-N) F_2` for
/// spins 5/2, 7/2 and 9/2.
#[derive(Clone, Debug)]
pub struct PrintedSum {
    l: u32,
    f1: Fraction,
    f2: Fraction,
}

impl PrintedSum {
    pub fn for_l(l: u32) -> Option<Self> {
        use Trig::*;
        let frac = |scale, num: &[i64], den: &[i64], basis: &[Trig]| Fraction {
            scale,
            num: Combination::new(num, basis),
            den: Combination::new(den, basis),
        };
        match l {
            7 => {
                let b = [One, Cos(1, 7), Sin(1, 14), Sin(3, 14)];
                Some(PrintedSum {
                    l,
                    f1: frac(6, &[-499, 525, 694, -900], &[-235, 290, 350, -434], &b),
                    f2: frac(1, &[-6, 120, 81, -38], &[-2, 15, 12, -6], &b),
                })
            }
            9 => {
                let b = [One, Cos(1, 9), Cos(2, 9), Sin(1, 18)];
                Some(PrintedSum {
                    l,
                    f1: frac(
                        1,
                        &[7695, 43820, -26108, -32210],
                        &[351, 2450, -1640, -1910],
                        &b,
                    ),
                    f2: frac(1, &[-459, 250, -1360, -976], &[-36, 40, -124, -100], &b),
                })
            }
            11 => {
                let b = [
                    One,
                    Cos(1, 11),
                    Cos(2, 11),
                    Sin(1, 22),
                    Sin(3, 22),
                    Sin(5, 22),
                ];
                Some(PrintedSum {
                    l,
                    f1: frac(
                        1,
                        &[-8675, 9780, -16727, 12895, -15050, 10925],
                        &[-376, 480, -730, 590, -670, 520],
                        &b,
                    ),
                    f2: frac(
                        1,
                        &[-75, 860, -207, 575, -378, 765],
                        &[-9, 60, -21, 45, -30, 55],
                        &b,
                    ),
                })
            }
            _ => None,
        }
    }

    /// `(N-1) F_1 + (2-N) F_2` evaluated in floating point.
    pub fn numeric<R: RealScalar>(&self, n: i64, prec: usize) -> R {
        R::from_i64_prec(n - 1, prec) * self.f1.numeric::<R>(prec)
            + R::from_i64_prec(2 - n, prec) * self.f2.numeric::<R>(prec)
    }

    /// The same expression as an exact element of `Q(zeta_{2L})`.
    pub fn exact(&self, n: i64) -> Option<CyclotomicNumber> {
        let field = CyclotomicField::for_chain(self.l);
        let l = i64::from(self.l);
        let f1 = self.f1.exact(&field, l)?;
        let f2 = self.f2.exact(&field, l)?;
        Some(
            f1.scale(&BigRational::from_integer((n - 1).into()))
                + f2.scale(&BigRational::from_integer((2 - n).into())),
        )
    }
}

/// Tolerance for the printed-expression comparison at 256 bits.
pub const PRINTED_FORM_LOG2_TOLERANCE: f64 = -180.0;

/// Compares `embed(E_1)` with the printed expressions at `N = 1, 2`
/// (numerically, tolerance `2^-180`), and records an exact comparison too.
pub fn printed_form_entries(
    l: u32,
    summaries: &[WSummary],
    precision_bits: usize,
) -> Vec<CheckEntry> {
    let Some(printed) = PrintedSum::for_l(l) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for s in summaries.iter().filter(|s| matches!(s.params.n(), 1 | 2)) {
        let n = i64::from(s.params.n());
        let ours: Complex<BigReal> = embed(&s.e1, precision_bits);
        let theirs: BigReal = printed
            .numeric::<BigReal>(n, precision_bits + 64)
            .with_precision(precision_bits);
        let gap = cabs(&(ours.clone() - Complex::new(theirs.clone(), BigReal::zero())));
        let log2 = gap.log2_abs();
        let pass = log2 < PRINTED_FORM_LOG2_TOLERANCE;
        let digits = if log2.is_finite() {
            format!("{:.0}", -log2 * std::f64::consts::LOG10_2)
        } else {
            "all".to_string()
        };
        out.push(
            CheckEntry::new(
                "section4",
                pass,
                Residual::numeric(log2, format_decimal(&gap.to_rational(), 6)),
                format!(
                    "E_1 = {} vs printed {} ({digits} matching digits)",
                    format_decimal(&ours.re.to_rational(), 40),
                    format_decimal(&theirs.to_rational(), 40)
                ),
            )
            .at(&s.params),
        );
        if let Some(exact) = printed.exact(n) {
            let r = &s.e1 - &exact;
            out.push(
                CheckEntry::new(
                    "printed-form-exact",
                    r.is_zero(),
                    Residual::Exact(r),
                    "printed expression rewritten in Q(zeta_2L) with sin(x) = cos(pi/2 - x)",
                )
                .at(&s.params),
            );
        }
    }
    out
}

/// Printed closed forms against `E_1` at `N = 1, 2`, for `L` in `{7, 9, 11}`.
pub fn crosscheck_printed_closed_forms(l: u32, precision_bits: usize) -> Result<Vec<CheckEntry>> {
    check_odd_l(l)?;
    if PrintedSum::for_l(l).is_none() {
        return Err(Error::InvalidParams(format!(
            "no printed closed form for L={l}"
        )));
    }
    let summaries = series_for(l, 2, Method::ClosedForm)?;
    Ok(printed_form_entries(l, &summaries, precision_bits))
}
