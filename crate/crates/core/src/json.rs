//! Lossless JSON forms: rationals as `"n/d"` strings, cyclotomic numbers as
//! `{order, coeffs, approx}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::cyclotomic::CyclotomicField;
use crate::exact::rational::{format_decimal, parse_ratio, report_digits, to_ratio_string};
use crate::numeric::{embed, RealScalar};
use crate::{BigReal, CyclotomicNumber};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub order: u32,
    pub coeffs: Vec<String>,
    pub approx: String,
}

impl CyclotomicJson {
    pub fn from_number(c: &CyclotomicNumber, precision_bits: usize) -> Self {
        CyclotomicJson {
            order: c.order(),
            coeffs: c.coeffs().iter().map(to_ratio_string).collect(),
            approx: approx_string(c, precision_bits),
        }
    }

    /// Rebuilds the exact element; `approx` is ignored.
    pub fn to_number(&self) -> Result<CyclotomicNumber> {
        let field = CyclotomicField::new(self.order);
        if self.coeffs.len() != field.degree() {
            return Err(Error::Parse(format!(
                "order {} needs {} coefficients, got {}",
                self.order,
                field.degree(),
                self.coeffs.len()
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(field.from_poly_coeffs(&coeffs))
    }
}

/// Decimal rendering of the embedding at `precision_bits`: a plain real
/// number for conjugation-fixed elements, `a+bi` otherwise.
pub fn approx_string(c: &CyclotomicNumber, precision_bits: usize) -> String {
    let z: Complex<BigReal> = embed(c, precision_bits);
    let digits = report_digits(precision_bits);
    let re = format_decimal(&z.re.to_rational(), digits);
    if c.is_real() {
        return re;
    }
    let im = z.im.to_rational();
    let sign = if im < num_rational::BigRational::default() {
        "-"
    } else {
        "+"
    };
    let im_abs = format_decimal(&num_traits::Signed::abs(&im), digits);
    format!("{re}{sign}{im_abs}i")
}
