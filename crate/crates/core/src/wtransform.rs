//! Change of spectral variable `z -> w = (z e^{2s eta} - 1)/(z - e^{2s eta})`
//! with `e^{2s eta} = e^{-2 pi i/L}` at the combinatorial point.
//!
//! The symmetric functions `E_alpha` of the `w_j` are expressed through the
//! rational `e_k`, normalised by `Q(e^{-2 pi i/L})`. The production path for
//! `E_1 = sum_j w_j` is the O(p) cosine form; the O(p^2) general `E_alpha`
//! sum is kept as an independent route.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::cyclotomic::CyclotomicField;
use crate::exact::rational::binomial;
use crate::params::ChainParams;
use crate::qop::QPolynomial;
use crate::report::{CheckEntry, Residual};
use crate::{CyclotomicNumber, RationalCyclotomicField};

#[derive(Clone, Debug)]
pub struct WSymmetrics {
    pub params: ChainParams,
    /// `E_1 = sum_j w_j`
    pub e1: CyclotomicNumber,
    /// `2 sum_{k<p} (-1)^k (p-k) cos(pi(2k+2-p)/L) e_k`
    pub numerator: CyclotomicNumber,
    /// `sum_k (-1)^k cos(pi(p-2k)/L) e_k`
    pub denominator: CyclotomicNumber,
    /// `E_0..E_p` when requested.
    pub e_alpha: Option<Vec<CyclotomicNumber>>,
}

fn half(c: BigRational) -> BigRational {
    c / BigRational::from_integer(BigInt::from(2))
}

/// `E_1` from the cosine sums. Fails if `Q(e^{-2 pi i/L})` vanishes or if
/// the quotient is not real.
pub fn w_sum(q: &QPolynomial) -> Result<WSymmetrics> {
    let params = *q.params();
    let field = CyclotomicField::for_chain(params.l());
    let p = q.degree() as i64;
    // cos(pi m / L) c = (c/2) zeta^m + (c/2) zeta^-m
    let numerator = field.sum_powers((0..p).flat_map(|k| {
        let c = half(q.signed(k as usize) * BigRational::from_integer(BigInt::from(2 * (p - k))));
        let m = 2 * k + 2 - p;
        [(m, c.clone()), (-m, c)]
    }));
    let denominator = field.sum_powers((0..=p).flat_map(|k| {
        let c = half(q.signed(k as usize));
        let m = p - 2 * k;
        [(m, c.clone()), (-m, c)]
    }));
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let e1 = numerator.checked_div(&denominator)?;
    if !e1.is_real() {
        return Err(Error::NotReal(format!("{params}: {e1:?}")));
    }
    Ok(WSymmetrics {
        params,
        e1,
        numerator,
        denominator,
        e_alpha: None,
    })
}

/// `Q(e^{-2 pi i/L})`, the normalisation of `chi(w)`.
pub fn q_at_pole(
    q: &QPolynomial,
    field: &std::sync::Arc<RationalCyclotomicField>,
) -> CyclotomicNumber {
    q.eval(&field.zeta_pow(-2))
}

/// The unnormalised double sum
/// `sum_k sum_j (-1)^k e^{-2 pi i(k+p-alpha-2j)/L} C(p-k, p-alpha-j) C(k, j) e_k`.
pub fn raw_numerator(q: &QPolynomial, alpha: usize) -> Result<CyclotomicNumber> {
    let p = q.degree();
    if alpha > p {
        return Err(Error::IndexOutOfRange {
            index: alpha,
            max: p,
        });
    }
    let field = CyclotomicField::for_chain(q.params().l());
    let mut terms = Vec::new();
    for k in 0..=p {
        let ek = q.signed(k);
        let lo = k.saturating_sub(alpha);
        let hi = k.min(p - alpha);
        for j in lo..=hi {
            let c = BigRational::from_integer(
                binomial((p - k) as u64, (p - alpha - j) as u64) * binomial(k as u64, j as u64),
            );
            // e^{-2 pi i t / L} = zeta^{-2t}
            let t = (k + p - alpha) as i64 - 2 * j as i64;
            terms.push((-2 * t, &ek * c));
        }
    }
    Ok(field.sum_powers(terms))
}

/// `E_alpha` through the general double-sum formula.
pub fn w_elementary(q: &QPolynomial, alpha: usize) -> Result<CyclotomicNumber> {
    let field = CyclotomicField::for_chain(q.params().l());
    let den = q_at_pole(q, &field);
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    raw_numerator(q, alpha)?.checked_div(&den)
}

/// [`w_sum`] plus every `E_alpha`, `alpha = 0..=p`.
pub fn w_symmetrics_full(q: &QPolynomial) -> Result<WSymmetrics> {
    let mut ws = w_sum(q)?;
    let all = (0..=q.degree())
        .map(|a| w_elementary(q, a))
        .collect::<Result<Vec<_>>>()?;
    ws.e_alpha = Some(all);
    Ok(ws)
}

/// Cross-checks the two routes to `E_1`, and that the phase `e^{-pi p i/L}`
/// factors out of both the raw numerator and `Q(e^{-2 pi i/L})`.
pub fn verify_e1_paths(q: &QPolynomial, ws: &WSymmetrics) -> CheckEntry {
    let field = CyclotomicField::for_chain(q.params().l());
    let phase = field.zeta_pow(-(q.degree() as i64));
    let run = || -> Result<(CyclotomicNumber, Vec<&'static str>)> {
        let general = w_elementary(q, 1)?;
        let diff = &general - &ws.e1;
        let mut broken = Vec::new();
        if !diff.is_zero() {
            broken.push("E_1 cosine form != general E_alpha at alpha=1");
        }
        if raw_numerator(q, 1)? != &phase * &ws.numerator {
            broken.push("raw numerator != e^{-pi p i/L} * cosine numerator");
        }
        if q_at_pole(q, &field) != &phase * &ws.denominator {
            broken.push("Q(e^{-2pi i/L}) != e^{-pi p i/L} * cosine denominator");
        }
        Ok((diff, broken))
    };
    let entry = match run() {
        Ok((diff, broken)) if broken.is_empty() => CheckEntry::new(
            "e1-paths",
            true,
            Residual::Exact(diff),
            "cosine form, general E_alpha and phase factorisation agree",
        ),
        Ok((diff, broken)) => {
            CheckEntry::new("e1-paths", false, Residual::Exact(diff), broken.join("; "))
        }
        Err(e) => CheckEntry::new("e1-paths", false, Residual::None, e.to_string()),
    };
    entry.at(q.params())
}

/// `sum_j 1/w_j = sum_j w_j`, stated as `E_{p-1} = E_1 E_p`.
pub fn verify_inverse_sum(q: &QPolynomial) -> CheckEntry {
    let p = q.degree();
    let run = || -> Result<CyclotomicNumber> {
        let e1 = w_elementary(q, 1)?;
        let ep = w_elementary(q, p)?;
        let epm1 = w_elementary(q, p - 1)?;
        Ok(&epm1 - &(&e1 * &ep))
    };
    let entry = match run() {
        Ok(r) => {
            let pass = r.is_zero();
            let detail = if pass {
                "E_(p-1) = E_1 E_p exactly".to_string()
            } else {
                "E_(p-1) - E_1 E_p is nonzero".to_string()
            };
            CheckEntry::new("inverse-sum", pass, Residual::Exact(r), detail)
        }
        Err(e) => CheckEntry::new("inverse-sum", false, Residual::None, e.to_string()),
    };
    entry.at(q.params())
}

/// Reality of `E_1` and nonvanishing of the normalisation. The cosine form
/// is real whenever the `e_k` are rational, so the test that carries
/// information is on the general `E_alpha` route, where reality follows only
/// from the palindromic symmetry of `Q`.
pub fn verify_reality(q: &QPolynomial) -> CheckEntry {
    let run = || -> Result<CyclotomicNumber> {
        let ws = w_sum(q)?;
        let general = w_elementary(q, 1)?;
        debug_assert!(ws.e1.is_real());
        Ok(&general - &general.conjugate())
    };
    let entry = match run() {
        Ok(im) if im.is_zero() => CheckEntry::new(
            "w-reality",
            true,
            Residual::Exact(im),
            "E_1 is conjugation-fixed on both routes, denominator nonzero",
        ),
        Ok(im) => CheckEntry::new(
            "w-reality",
            false,
            Residual::Exact(im),
            "general-route E_1 is not real",
        ),
        Err(e) => CheckEntry::new("w-reality", false, Residual::None, e.to_string()),
    };
    entry.at(q.params())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::qop::q_closed_form;

    fn q(l: u32, n: u32) -> QPolynomial {
        q_closed_form(ChainParams::new(l, n).unwrap()).unwrap()
    }

    #[test]
    fn spin_half_sums() {
        let ws = w_sum(&q(3, 1)).unwrap();
        assert_eq!(ws.numerator.as_scalar(), Some(&int(1)));
        assert_eq!(ws.denominator.as_scalar(), Some(&int(1)));
        assert_eq!(ws.e1.as_scalar(), Some(&int(1)));
        let ws = w_sum(&q(3, 2)).unwrap();
        assert_eq!(ws.numerator.as_scalar(), Some(&rat(9, 5)));
        assert_eq!(ws.denominator.as_scalar(), Some(&rat(6, 5)));
        assert_eq!(ws.e1.as_scalar(), Some(&rat(3, 2)));
    }

    #[test]
    fn spin_three_halves_sum() {
        // (5 + 7 sqrt5)/4 with sqrt5 = 4cos(pi/5) - 1
        let ws = w_sum(&q(5, 1)).unwrap();
        let f = ws.e1.field().clone();
        let sqrt5 = f.zeta_cos(1).scale(&int(4)) - f.one();
        assert!((&sqrt5 * &sqrt5 - f.from_scalar(int(5))).is_zero());
        let want = (f.from_scalar(int(5)) + sqrt5.scale(&int(7))).scale(&rat(1, 4));
        assert_eq!(ws.e1, want);
    }

    #[test]
    fn elementary_specialisations() {
        let q32 = q(3, 2);
        assert!(w_elementary(&q32, 0).unwrap().is_one());
        assert_eq!(w_elementary(&q32, 1).unwrap().as_scalar(), Some(&rat(3, 2)));
        // z_1 = -1 maps to w_1 = 1
        assert!(w_elementary(&q(3, 1), 1).unwrap().is_one());
        assert!(w_elementary(&q32, 2).unwrap().is_one());
        assert!(matches!(
            w_elementary(&q32, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        let full = w_symmetrics_full(&q(5, 1)).unwrap();
        let e = full.e_alpha.unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(e[1], full.e1);
    }

    #[test]
    fn checks_pass_on_genuine_q() {
        for (l, n) in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let qq = q(l, n);
            let ws = w_sum(&qq).unwrap();
            assert!(verify_e1_paths(&qq, &ws).pass, "{l} {n}");
            assert!(verify_inverse_sum(&qq).pass, "{l} {n}");
            assert!(verify_reality(&qq).pass, "{l} {n}");
        }
    }

    #[test]
    fn non_palindromic_input_is_not_real() {
        let bad = q(5, 1).perturbed(1, &int(1)).unwrap();
        // the cosine form stays real by construction; the general route does not
        assert!(w_sum(&bad).unwrap().e1.is_real());
        assert!(!w_elementary(&bad, 1).unwrap().is_real());
        assert!(!verify_reality(&bad).pass);
        let ws = w_sum(&bad).unwrap();
        assert!(!verify_e1_paths(&bad, &ws).pass);
    }
}
