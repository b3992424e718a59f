//! String forms of exact rationals and exact dyadic helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Serialises as `"numerator/denominator"` in base 10; the denominator is
/// always printed, even when it is 1.
pub fn to_ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"a/b"` or a bare integer `"a"`; the result is reduced.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("{s:?}: zero denominator")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `10^e` for non-negative `e`.
fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

/// Rounds `|x|` to `sig` significant decimal digits and renders it in plain
/// positional notation (scientific notation outside `1e-30 .. 1e30`).
///
/// Ties round away from zero. The output depends only on `x` and `sig`.
pub fn format_decimal(x: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    // decimal exponent estimate from bit lengths, then correct
    let bits = ax.numer().bits() as i64 - ax.denom().bits() as i64;
    let mut e10 = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let scaled_for = |e10: i64| -> BigRational {
        let shift = sig as i64 - 1 - e10;
        if shift >= 0 {
            &ax * BigRational::from_integer(pow10(shift as u32))
        } else {
            &ax / BigRational::from_integer(pow10((-shift) as u32))
        }
    };
    let lower = pow10(sig as u32 - 1);
    let upper = pow10(sig as u32);
    let mut digits: BigInt;
    loop {
        let s = scaled_for(e10);
        // round half away from zero
        let twice = s * BigRational::from_integer(BigInt::from(2));
        let (q, r) = twice.numer().div_rem(twice.denom());
        digits = (q + if r.is_zero() { 0 } else { 1 }) / 2;
        if digits < lower {
            e10 -= 1;
        } else if digits >= upper {
            e10 += 1;
        } else {
            break;
        }
    }
    let mut ds = digits.to_string();
    debug_assert_eq!(ds.len(), sig);
    // trim trailing zeros of the mantissa
    while ds.len() > 1 && ds.ends_with('0') {
        ds.pop();
    }
    let sign = if neg { "-" } else { "" };
    let body = if (-30..30).contains(&e10) {
        if e10 >= 0 {
            let int_len = e10 as usize + 1;
            if ds.len() <= int_len {
                format!("{ds}{}", "0".repeat(int_len - ds.len()))
            } else {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            }
        } else {
            format!("0.{}{ds}", "0".repeat((-e10 - 1) as usize))
        }
    } else if ds.len() > 1 {
        format!("{}.{}e{e10}", &ds[..1], &ds[1..])
    } else {
        format!("{ds}e{e10}")
    };
    format!("{sign}{body}")
}

/// Number of significant decimal digits reported for a value carried at
/// `precision_bits`, keeping 16 bits in reserve.
pub fn report_digits(precision_bits: usize) -> usize {
    ((precision_bits.saturating_sub(16)) as f64 * std::f64::consts::LOG10_2).floor() as usize
}

/// Exact value of `mantissa * 2^exp2`.
pub fn dyadic(mantissa: BigInt, exp2: i64) -> BigRational {
    if exp2 >= 0 {
        BigRational::from_integer(mantissa << exp2 as usize)
    } else {
        BigRational::new(
            mantissa,
            BigInt::from_biguint(Sign::Plus, One::one()) << (-exp2) as usize,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_strings() {
        assert_eq!(to_ratio_string(&rat(-22, 10)), "-11/5");
        assert_eq!(to_ratio_string(&int(1)), "1/1");
        assert_eq!(parse_ratio("-11/5").unwrap(), rat(-11, 5));
        assert_eq!(parse_ratio("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_ratio("7").unwrap(), int(7));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(40, 20), BigInt::from(137846528820u64));
    }

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(&rat(1, 2), 10), "0.5");
        assert_eq!(format_decimal(&rat(-5, 1), 10), "-5");
        assert_eq!(format_decimal(&rat(2, 3), 5), "0.66667");
        assert_eq!(format_decimal(&rat(-1, 3), 3), "-0.333");
        assert_eq!(format_decimal(&rat(999_999, 1000), 3), "1000");
        assert_eq!(format_decimal(&rat(1, 800), 3), "0.00125");
        assert_eq!(format_decimal(&rat(120, 1), 5), "120");
        assert_eq!(
            format_decimal(&dyadic(BigInt::from(3), -110), 4),
            "2.311e-33"
        );
        assert_eq!(format_decimal(&dyadic(BigInt::from(1), 100), 3), "1.27e30");
        assert_eq!(report_digits(256), 72);
    }
}
