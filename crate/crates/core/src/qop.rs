//! The Q operator `Q(z) = prod_j (z - z_j) = sum_k (-1)^k e_k z^{p-k}` in the
//! multiplicative spectral variable `z = e^{2u}`.
//!
//! Two independent builders: the interpolation closed form (a rational
//! numerator divided exactly by `(z-1)^{2N+1}`) and the linear system the
//! TQ relation imposes on `e_1..e_p`. Both must agree coefficient for
//! coefficient.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::cyclotomic::CyclotomicField;
use crate::exact::linalg::solve_linear_system;
use crate::exact::rational::{binomial, to_ratio_string};
use crate::params::ChainParams;
use crate::report::{CheckEntry, Residual};
use crate::{CyclotomicNumber, RationalCyclotomicField, RationalPolynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    params: ChainParams,
    e: Vec<BigRational>,
}

impl QPolynomial {
    /// Wraps `e_0..e_p`; only the length is validated here, the structural
    /// identities are checked by [`verify_structure`].
    pub fn new(params: ChainParams, e: Vec<BigRational>) -> Result<Self> {
        if e.len() != params.roots() + 1 {
            return Err(Error::InvalidParams(format!(
                "{params}: expected {} coefficients, got {}",
                params.roots() + 1,
                e.len()
            )));
        }
        Ok(QPolynomial { params, e })
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    /// `e_0..e_p`
    pub fn e(&self) -> &[BigRational] {
        &self.e
    }

    pub fn degree(&self) -> usize {
        self.e.len() - 1
    }

    /// Signed coefficient of `z^{p-k}`, i.e. `(-1)^k e_k`.
    pub fn signed(&self, k: usize) -> BigRational {
        if k.is_multiple_of(2) {
            self.e[k].clone()
        } else {
            -self.e[k].clone()
        }
    }

    /// Ascending-degree coefficients of `Q(z)`.
    pub fn to_polynomial(&self) -> RationalPolynomial {
        let p = self.degree();
        RationalPolynomial::new((0..=p).map(|i| self.signed(p - i)).collect())
    }

    /// Copy with `e_k` shifted by `delta` (negative controls).
    pub fn perturbed(&self, k: usize, delta: &BigRational) -> Result<Self> {
        if k > self.degree() {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.degree(),
            });
        }
        let mut e = self.e.clone();
        e[k] += delta;
        Ok(QPolynomial {
            params: self.params,
            e,
        })
    }

    /// Horner evaluation at a point of the cyclotomic field.
    pub fn eval(&self, z: &CyclotomicNumber) -> CyclotomicNumber {
        let f = z.field();
        (0..=self.degree()).fold(f.zero(), |acc, k| &acc * z + f.from_scalar(self.signed(k)))
    }
}

/// `q_eval`
pub fn q_eval(q: &QPolynomial, z: &CyclotomicNumber) -> CyclotomicNumber {
    q.eval(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    LinearSystem,
    Both,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(Method::ClosedForm),
            "linear-system" => Ok(Method::LinearSystem),
            "both" => Ok(Method::Both),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::LinearSystem => "linear-system",
            Method::Both => "both",
        })
    }
}

/// Builds Q with the chosen method; `Both` runs the two builders and fails
/// on any coefficient difference.
pub fn build_q(params: ChainParams, method: Method) -> Result<QPolynomial> {
    match method {
        Method::ClosedForm => q_closed_form(params),
        Method::LinearSystem => q_linear_system(params),
        Method::Both => {
            let a = q_closed_form(params)?;
            let b = q_linear_system(params)?;
            if a != b {
                return Err(Error::MethodMismatch {
                    l: params.l(),
                    n: params.n(),
                });
            }
            Ok(a)
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `prod_{j=0}^{N} (h + Lj) / (sign*h - Lk + Lj)` with `h = (L-1)/2`.
fn interpolation_weight(params: &ChainParams, k: usize, sign: i64) -> Result<BigRational> {
    let l = i64::from(params.l());
    let h = i64::from(params.half());
    let mut acc = BigRational::one();
    for j in 0..=params.n() as usize {
        let den = sign * h - l * k as i64 + l * j as i64;
        // L odd never divides (L-1)/2, so this cannot trigger for valid params
        if den == 0 {
            return Err(Error::ZeroProductFactor { k, j });
        }
        acc *= BigRational::new((h + l * j as i64).into(), den.into());
    }
    Ok(acc)
}

/// Interpolation formula: the bracketed numerator divided exactly by
/// `(z-1)^{2N+1}`. The upper summation limits depend on the parity of `N`.
pub fn q_closed_form(params: ChainParams) -> Result<QPolynomial> {
    let l = params.l() as usize;
    let n = params.n() as usize;
    let h = params.half() as usize;
    let p = params.roots();
    let (first_max, second_max): (usize, Option<usize>) = if n.is_multiple_of(2) {
        (n / 2, (n / 2).checked_sub(1))
    } else {
        ((n - 1) / 2, Some((n - 1) / 2))
    };

    let top = l * n + h;
    let mut num = vec![BigRational::zero(); top + 1];
    for k in 0..=first_max {
        let c = alt_binomial(n, k) * interpolation_weight(&params, k, 1)?;
        num[top - l * k] += &c;
        num[l * k] -= &c;
    }
    if let Some(kmax) = second_max {
        for k in 0..=kmax {
            let c = alt_binomial(n, k) * interpolation_weight(&params, k, -1)?;
            num[l * n - l * k] += &c;
            num[l * k + h] -= &c;
        }
    }
    let numerator = RationalPolynomial::new(num);
    let divisor = RationalPolynomial::new(vec![int(-1), int(1)]).pow(2 * params.n() + 1);
    let q = numerator.divide_exact(&divisor)?;
    if q.degree() != Some(p) {
        return Err(Error::InvalidParams(format!(
            "{params}: closed form has degree {:?}, expected {p}",
            q.degree()
        )));
    }
    let e = (0..=p)
        .map(|k| {
            let c = q.coeff(p - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    QPolynomial::new(params, e)
}

fn alt_binomial(n: usize, k: usize) -> BigRational {
    let b = BigRational::from_integer(binomial(n as u64, k as u64));
    if k.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

/// Row indices `l in 0..=NL+(L-1)/2` with `l != Lk, Lk+(L-1)/2`.
pub fn admissible_rows(params: &ChainParams) -> Vec<usize> {
    let l = params.l() as usize;
    let h = params.half() as usize;
    let top = params.n() as usize * l + h;
    (0..=top)
        .filter(|&r| {
            let m = r % l;
            m != 0 && m != h
        })
        .collect()
}

/// Solves `sum_j C(2N+1, l-j) e_j = 0` over the admissible rows with
/// `e_0 = 1` moved to the right-hand side.
pub fn q_linear_system(params: ChainParams) -> Result<QPolynomial> {
    let p = params.roots();
    let width = 2 * params.n() as usize + 1;
    let rows = admissible_rows(&params);
    if rows.len() != p {
        return Err(Error::EquationCount {
            found: rows.len(),
            expected: p,
        });
    }
    let coef = |r: usize, j: usize| -> BigRational {
        if j <= r && r - j <= width {
            BigRational::from_integer(binomial(width as u64, (r - j) as u64))
        } else {
            BigRational::zero()
        }
    };
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&r| (1..=p).map(|j| coef(r, j)).collect())
        .collect();
    let b: Vec<BigRational> = rows.iter().map(|&r| -coef(r, 0)).collect();
    let x = solve_linear_system(&a, &b)?;
    let mut e = Vec::with_capacity(p + 1);
    e.push(BigRational::one());
    e.extend(x);
    QPolynomial::new(params, e)
}

/// Checks `e_0 = 1`, `e_p = (-1)^p` (that is `Q(0) = 1`) and the
/// palindrome `e_k = (-1)^p e_{p-k}`.
pub fn verify_structure(q: &QPolynomial) -> CheckEntry {
    let p = q.degree();
    let sign = if p.is_multiple_of(2) { int(1) } else { int(-1) };
    let mut problems = Vec::new();
    if !q.e[0].is_one() {
        problems.push(format!("e_0 = {}", to_ratio_string(&q.e[0])));
    }
    if q.e[p] != sign {
        problems.push(format!("e_p = {}", to_ratio_string(&q.e[p])));
    }
    let q0 = q.to_polynomial().coeff(0);
    if !q0.is_one() {
        problems.push(format!("Q(0) = {}", to_ratio_string(&q0)));
    }
    for k in 0..=p / 2 {
        if q.e[k] != &sign * &q.e[p - k] {
            problems.push(format!("palindrome broken at k={k}"));
        }
    }
    let pass = problems.is_empty();
    let detail = if pass {
        format!("p={p}: e_0=1, e_p=(-1)^p, Q(0)=1, e_k=(-1)^p e_(p-k)")
    } else {
        problems.join("; ")
    };
    CheckEntry::new("structure", pass, Residual::None, detail).at(q.params())
}

/// Coefficients (ascending in `z`) of the three-term combination
///
/// `-2cos((L-1)pi/2L) (z-1)^M Q(z) + e^{-i(L-1)pi/2L} (z-w)^M Q_w(z)
///  + e^{i(L-1)pi/2L} (z-w^-1)^M Q_{w^-1}(z)`
///
/// with `w = e^{2 pi i/L}` and `Q_c(z) = prod_j (z - c z_j)`, expanded from
/// the `e_k`. It vanishes identically for a genuine Q.
pub fn tq_residual(q: &QPolynomial) -> Vec<CyclotomicNumber> {
    let params = q.params();
    let field: Arc<RationalCyclotomicField> = CyclotomicField::for_chain(params.l());
    let h = i64::from(params.half());
    let terms = [
        (field.one(), -field.zeta_cos(h).scale(&int(2))),
        (field.zeta_pow(2), field.zeta_pow(-h)),
        (field.zeta_pow(-2), field.zeta_pow(h)),
    ];
    let m = params.sites() as usize;
    let p = q.degree();
    let mut total = vec![field.zero(); m + p + 1];
    for (c, pref) in &terms {
        // (z - c)^M, ascending
        let neg_c = -c;
        let shift: Vec<CyclotomicNumber> = (0..=m)
            .map(|i| {
                let b = BigRational::from_integer(binomial(m as u64, i as u64));
                neg_c.pow((m - i) as u32).scale(&b)
            })
            .collect();
        // prod_j (z - c z_j) = sum_k (-1)^k c^k e_k z^{p-k}, ascending
        let mut twisted = vec![field.zero(); p + 1];
        let mut ck = field.one();
        for k in 0..=p {
            twisted[p - k] = ck.scale(&q.signed(k));
            ck = &ck * c;
        }
        for (i, a) in shift.iter().enumerate() {
            let a = a * pref;
            for (j, b) in twisted.iter().enumerate() {
                if !b.is_zero() {
                    total[i + j] = &total[i + j] + &(&a * b);
                }
            }
        }
    }
    total
}

pub fn verify_tq_identity(q: &QPolynomial) -> CheckEntry {
    let residual = tq_residual(q);
    let nonzero: Vec<usize> = residual
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect();
    let entry = match nonzero.first() {
        None => CheckEntry::new(
            "tq",
            true,
            Residual::Exact(residual[0].clone()),
            format!(
                "three-term identity vanishes through degree {}",
                residual.len() - 1
            ),
        ),
        Some(&d) => CheckEntry::new(
            "tq",
            false,
            Residual::Exact(residual[d].clone()),
            format!("nonzero coefficients at degrees {nonzero:?}; residual shown at degree {d}"),
        ),
    };
    entry.at(q.params())
}
