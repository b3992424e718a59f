//! Arbitrary-precision binary float backed by `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use super::scalar::RealScalar;
use crate::exact::rational::{dyadic, format_decimal, report_digits};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = Word::BITS as usize;
/// Precision attached to exactly representable small literals.
pub const LITERAL_PRECISION: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
}

impl BigReal {
    fn from_float(value: BigFloat, prec: usize) -> Self {
        debug_assert!(!value.is_nan(), "NaN in BigReal arithmetic");
        BigReal { value, prec }
    }

    pub fn raw(&self) -> &BigFloat {
        &self.value
    }

    pub fn is_zero_value(&self) -> bool {
        self.value.is_zero()
    }

    /// Decimal rendering with the digit count implied by the precision.
    pub fn to_decimal(&self) -> String {
        format_decimal(&self.to_rational(), report_digits(self.prec))
    }

    fn prec2(&self, o: &Self) -> usize {
        self.prec.max(o.prec)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigReal({}, {} bits)",
            format_decimal(&self.to_rational(), 30),
            self.prec
        )
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! arith {
    ($tr:ident, $m:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                let p = self.prec2(&rhs);
                BigReal::from_float(self.value.$m(&rhs.value, p, RM), p)
            }
        }
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal {
                let p = self.prec2(rhs);
                BigReal::from_float(self.value.$m(&rhs.value, p, RM), p)
            }
        }
    };
}
arith!(Add, add);
arith!(Sub, sub);
arith!(Mul, mul);
arith!(Div, div);

impl Rem for BigReal {
    type Output = BigReal;
    fn rem(self, rhs: BigReal) -> BigReal {
        let p = self.prec2(&rhs);
        BigReal::from_float(self.value.rem(&rhs.value), p)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::from_float(self.value.neg(), self.prec)
    }
}

impl Zero for BigReal {
    fn zero() -> Self {
        BigReal::from_float(BigFloat::from_word(0, LITERAL_PRECISION), LITERAL_PRECISION)
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for BigReal {
    fn one() -> Self {
        BigReal::from_float(BigFloat::from_word(1, LITERAL_PRECISION), LITERAL_PRECISION)
    }
}

impl Num for BigReal {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        let rdx = match radix {
            2 => astro_float::Radix::Bin,
            8 => astro_float::Radix::Oct,
            10 => astro_float::Radix::Dec,
            16 => astro_float::Radix::Hex,
            _ => return Err(format!("unsupported radix {radix}")),
        };
        let p = crate::DEFAULT_PRECISION_BITS;
        let v = with_consts(|cc| BigFloat::parse(s, rdx, p, RM, cc));
        if v.is_nan() {
            Err(format!("cannot parse {s:?}"))
        } else {
            Ok(BigReal::from_float(v, p))
        }
    }
}

fn bigint_to_float(v: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = v.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_word(0, prec);
    }
    let words: Vec<Word> = digits_to_words(&digits);
    let s = if sign == BigSign::Minus {
        Sign::Neg
    } else {
        Sign::Pos
    };
    let exp = (words.len() * WORD_BITS) as i32;
    let mut f = BigFloat::from_words(&words, s, exp);
    // from_words keeps every mantissa bit; round to the requested precision
    if f.mantissa_max_bit_len().unwrap_or(0) > prec {
        f.set_precision(prec, RM).expect("set precision");
    }
    f
}

#[cfg(target_pointer_width = "64")]
fn digits_to_words(d: &[u64]) -> Vec<Word> {
    d.to_vec()
}

#[cfg(not(target_pointer_width = "64"))]
fn digits_to_words(d: &[u64]) -> Vec<Word> {
    d.iter()
        .flat_map(|&x| [x as Word, (x >> 32) as Word])
        .collect()
}

impl RealScalar for BigReal {
    fn precision(&self) -> usize {
        self.prec
    }

    fn with_precision(&self, prec: usize) -> Self {
        let mut v = self.value.clone();
        v.set_precision(prec, RM).expect("set precision");
        BigReal::from_float(v, prec)
    }

    fn from_i64_prec(v: i64, prec: usize) -> Self {
        Self::from_bigint_prec(&BigInt::from(v), prec)
    }

    fn from_bigint_prec(v: &BigInt, prec: usize) -> Self {
        BigReal::from_float(bigint_to_float(v, prec), prec)
    }

    fn from_f64_prec(v: f64, prec: usize) -> Self {
        BigReal::from_float(BigFloat::from_f64(v, prec.max(64)), prec)
    }

    fn exp2_prec(e: i64, prec: usize) -> Self {
        let mut v = BigFloat::from_word(1, prec);
        v.set_exponent((e + 1) as i32);
        BigReal::from_float(v, prec)
    }

    fn pi_prec(prec: usize) -> Self {
        BigReal::from_float(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    fn sqrt(&self) -> Self {
        BigReal::from_float(self.value.sqrt(self.prec, RM), self.prec)
    }

    fn cos(&self) -> Self {
        BigReal::from_float(
            with_consts(|cc| self.value.cos(self.prec, RM, cc)),
            self.prec,
        )
    }

    fn sin(&self) -> Self {
        BigReal::from_float(
            with_consts(|cc| self.value.sin(self.prec, RM, cc)),
            self.prec,
        )
    }

    fn abs(&self) -> Self {
        BigReal::from_float(self.value.abs(), self.prec)
    }

    fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> BigRational {
        let Some((words, _bits, sign, exp, _)) = self.value.as_raw_parts() else {
            return BigRational::zero();
        };
        if self.value.is_zero() {
            return BigRational::zero();
        }
        let digits: Vec<u32> = words
            .iter()
            .flat_map(|&w| [w as u32, (w >> 32) as u32])
            .collect();
        let mut m = BigInt::from_slice(BigSign::Plus, &digits);
        if sign == Sign::Neg {
            m = -m;
        }
        let word_bits = (words.len() * WORD_BITS) as i64;
        dyadic(m, exp as i64 - word_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn integer_roundtrip() {
        for v in [0i64, 1, -1, 7, -123456789, i64::MAX, i64::MIN + 1] {
            let x = BigReal::from_i64_prec(v, 128);
            assert_eq!(x.to_rational(), BigRational::from_integer(v.into()), "{v}");
        }
        let big = BigInt::from(3) << 300usize;
        assert_eq!(
            BigReal::from_bigint_prec(&big, 128).to_rational(),
            BigRational::from_integer(big)
        );
    }

    #[test]
    fn literals_and_powers() {
        assert_eq!(
            BigReal::one().to_rational(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(BigReal::exp2_prec(-3, 128).to_rational(), rat(1, 8));
        assert_eq!(BigReal::exp2_prec(5, 128).to_rational(), rat(32, 1));
        let half = BigReal::from_rational_prec(&rat(1, 2), 128);
        assert_eq!(half.to_rational(), rat(1, 2));
    }

    #[test]
    fn precision_propagates() {
        let third = BigReal::one() / BigReal::from_i64_prec(3, 256);
        assert_eq!(third.precision(), 256);
        let err = third.to_rational() - rat(1, 3);
        assert!(RealScalar::log2_abs(&BigReal::from_rational_prec(&err, 64)) < -250.0);
    }

    #[test]
    fn transcendental() {
        let p = 256;
        let pi = BigReal::pi_prec(p);
        let c = (pi.clone() / BigReal::from_i64_prec(3, p)).cos();
        let err = c - BigReal::from_rational_prec(&rat(1, 2), p);
        assert!(err.log2_abs() < -250.0);
        let s = BigReal::from_i64_prec(2, p).sqrt();
        let err = s.clone() * s - BigReal::from_i64_prec(2, p);
        assert!(err.log2_abs() < -250.0);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn ordering_and_decimal() {
        let a = BigReal::from_i64_prec(-2, 128);
        let b = BigReal::from_rational_prec(&rat(1, 3), 128);
        assert!(a < b);
        assert_eq!(a.to_decimal(), "-2");
        assert!(b
            .to_decimal()
            .starts_with("0.33333333333333333333333333333333"));
    }
}
