//! Complex embedding `zeta -> e^{2 pi i / n}` of cyclotomic numbers.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::RealScalar;
use crate::exact::cyclotomic::Cyclotomic;

/// Extra bits carried internally on top of the coefficient sizes so that
/// the rounded result is good to the requested precision.
const EMBED_GUARD_BITS: usize = 32;

/// Numeric value of `a` at `precision_bits`.
///
/// Internally the power-basis sum is formed with enough guard bits to absorb
/// cancellation between coefficients, then rounded to `precision_bits`.
pub fn embed<R: RealScalar>(a: &Cyclotomic<BigRational>, precision_bits: usize) -> Complex<R> {
    let max_bits = a
        .coeffs()
        .iter()
        .map(|c| c.numer().bits().max(c.denom().bits()) as usize)
        .max()
        .unwrap_or(0);
    let wp = precision_bits + EMBED_GUARD_BITS + max_bits;
    let n = a.order() as i64;
    let two_pi_over_n = R::pi_prec(wp) * R::from_i64_prec(2, wp) / R::from_i64_prec(n, wp);
    let mut re = R::from_i64_prec(0, wp);
    let mut im = R::from_i64_prec(0, wp);
    for (k, c) in a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cr = R::from_rational_prec(c, wp);
        if k == 0 {
            re = re + cr;
            continue;
        }
        let theta = two_pi_over_n.clone() * R::from_i64_prec(k as i64, wp);
        re = re + cr.clone() * theta.cos();
        im = im + cr * theta.sin();
    }
    Complex::new(
        re.with_precision(precision_bits),
        im.with_precision(precision_bits),
    )
}

/// Numeric value of a rational at `precision_bits`.
pub fn embed_real_rational<R: RealScalar>(x: &BigRational, precision_bits: usize) -> R {
    R::from_rational_prec(x, precision_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cyclotomic::{cyc_cos, cyc_root_of_unity, CyclotomicField};
    use crate::exact::rational::{int, rat};
    use crate::numeric::bigreal::BigReal;
    use crate::numeric::scalar::cabs;
    use proptest::prelude::*;

    #[test]
    fn rational_is_exact() {
        let f = CyclotomicField::for_chain(5);
        let z: Complex<BigReal> = embed(&f.from_scalar(rat(1, 2)), 128);
        assert_eq!(z.re.to_rational(), rat(1, 2));
        assert!(z.im.is_zero_value());
    }

    #[test]
    fn cos_two_pi_over_five() {
        let p = 256;
        let z: Complex<BigReal> = embed(&cyc_cos(2, 5).unwrap(), p);
        // (sqrt5 - 1)/4
        let s5 = BigReal::from_i64_prec(5, p + 64).sqrt();
        let want = (s5 - BigReal::from_i64_prec(1, p)) / BigReal::from_i64_prec(4, p);
        assert!((z.re - want).log2_abs() < -(p as f64) + 8.0);
        assert!(z.im.log2_abs() < -(p as f64));
    }

    #[test]
    fn cube_root_of_unity() {
        let p = 200;
        let z: Complex<BigReal> = embed(&cyc_root_of_unity(1, 3).unwrap(), p);
        let half = BigReal::from_rational_prec(&rat(-1, 2), p);
        let s3h = BigReal::from_i64_prec(3, p).sqrt() / BigReal::from_i64_prec(2, p);
        assert!((z.re - half).log2_abs() < -190.0);
        assert!((z.im - s3h).log2_abs() < -190.0);
        let zf: Complex<f64> = embed(&cyc_root_of_unity(1, 3).unwrap(), 64);
        assert!((zf.re + 0.5).abs() < 1e-15);
    }

    fn small(l: u32) -> impl Strategy<Value = Cyclotomic<BigRational>> {
        let f = CyclotomicField::for_chain(l);
        let d = f.degree();
        proptest::collection::vec((-9i64..9, 1i64..5), d).prop_map(move |v| {
            f.from_poly_coeffs(&v.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn embedding_is_multiplicative(a in small(7), b in small(7)) {
            let p = 192;
            let ea: Complex<BigReal> = embed(&a, p);
            let eb: Complex<BigReal> = embed(&b, p);
            let eab: Complex<BigReal> = embed(&(&a * &b), p);
            let diff = eab - ea * eb;
            prop_assert!(cabs(&diff).log2_abs() < -(p as f64) + 20.0);
        }

        #[test]
        fn real_elements_embed_real(a in small(9)) {
            let r = &a + &a.conjugate();
            let e: Complex<BigReal> = embed(&r, 128);
            prop_assert!(e.im.log2_abs() < -100.0);
            let _ = int(0);
        }
    }
}
