//! Numeric validation: the zeros of `Q(z)`, their `w` images, and the
//! Bethe equations in both the `z` and the `w` form.
//!
//! Nothing computed here feeds back into the exact pipeline.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::format_decimal;
use crate::numeric::scalar::cis;
use crate::numeric::{cabs, embed, RealScalar};
use crate::params::ChainParams;
use crate::qop::QPolynomial;
use crate::report::{CheckEntry, Residual};
use crate::wtransform::WSymmetrics;
use crate::{BigReal, PrecisionComplex};

pub const MIN_PRECISION_BITS: usize = 128;
/// Bits carried beyond the requested precision while locating roots. The
/// coefficients reach `2^28` at `L = 11, N = 4`, and a root rounded to
/// exactly `P` bits would leave `|Q(z)|` near `2^(30 - P)`.
pub const GUARD_BITS: usize = 64;
pub const ITERATION_CAP: usize = 200;

const SEED: u64 = 0x0b57_ac1e;

/// `log2 |z|`
fn log2_cabs<R: RealScalar>(z: &Complex<R>) -> f64 {
    z.norm_sqr().log2_abs() / 2.0
}

/// `p(z)` and `p'(z)` by Horner, coefficients in ascending order.
fn horner<R: RealScalar>(coeffs: &[R], z: &Complex<R>) -> (Complex<R>, Complex<R>) {
    let zero = Complex::new(R::zero(), R::zero());
    let mut p = zero.clone();
    let mut dp = zero;
    for c in coeffs.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + Complex::new(c.clone(), R::zero());
    }
    (p, dp)
}

/// Positive root of `|a_n| x^n = sum_{k<n} |a_k| x^k`, an upper bound on
/// every root modulus.
pub fn cauchy_bound(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let g = |x: f64| {
        let lower: f64 = coeffs[..n]
            .iter()
            .enumerate()
            .map(|(k, a)| a.abs() * x.powi(k as i32))
            .sum();
        lead * x.powi(n as i32) - lower
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[derive(Clone, Debug)]
pub struct AberthOutcome<R> {
    pub roots: Vec<Complex<R>>,
    pub iterations: usize,
    /// `max_j log2(|correction_j| / max(1, |z_j|))` of the last sweep.
    pub log2_correction: f64,
    pub converged: bool,
}

/// Aberth–Ehrlich simultaneous iteration (Gauss–Seidel updates) until every
/// relative correction is below `2^stop_log2`.
pub fn aberth<R: RealScalar>(
    coeffs: &[R],
    mut roots: Vec<Complex<R>>,
    stop_log2: f64,
    cap: usize,
) -> AberthOutcome<R> {
    let n = roots.len();
    let one = Complex::new(R::one(), R::zero());
    let mut worst = f64::INFINITY;
    for it in 1..=cap {
        worst = f64::NEG_INFINITY;
        for i in 0..n {
            let (p, dp) = horner(coeffs, &roots[i]);
            if p.is_zero() {
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex::new(R::zero(), R::zero());
            for j in (0..n).filter(|&j| j != i) {
                repulsion = repulsion + one.clone() / (roots[i].clone() - roots[j].clone());
            }
            let step = newton.clone() / (one.clone() - newton * repulsion);
            let scale = log2_cabs(&roots[i]).max(0.0);
            worst = worst.max(log2_cabs(&step) - scale);
            roots[i] = roots[i].clone() - step;
        }
        if worst < stop_log2 {
            return AberthOutcome {
                roots,
                iterations: it,
                log2_correction: worst,
                converged: true,
            };
        }
    }
    AberthOutcome {
        roots,
        iterations: cap,
        log2_correction: worst,
        converged: false,
    }
}

/// Starting points on the Cauchy circle, with a seeded random phase offset
/// so that conjugate-symmetric polynomials cannot trap pairs on the real axis.
pub fn initial_guesses(coeffs: &[f64], seed: u64) -> Vec<Complex<f64>> {
    let n = coeffs.len() - 1;
    let radius = cauchy_bound(coeffs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset: f64 = rng.gen_range(0.0..std::f64::consts::TAU / n as f64);
    (0..n)
        .map(|k| Complex::from_polar(radius, offset + std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

#[derive(Clone, Debug)]
pub struct PolishedRoots<R> {
    pub roots: Vec<Complex<R>>,
    pub iterations: usize,
    /// Largest final Newton correction, as `log2` relative to `max(1, |z|)`.
    pub log2_correction: f64,
}

/// All roots of a monic real polynomial given by rational coefficients in
/// ascending order: an `f64` warm start, then iteration at `working_bits`,
/// then Newton polishing. Fails unless every final correction is below
/// `2^-(precision_bits - 16)`.
pub fn polynomial_roots<R: RealScalar>(
    coeffs: &[BigRational],
    precision_bits: usize,
    working_bits: usize,
    seed: u64,
) -> Result<PolishedRoots<R>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(PolishedRoots {
            roots: Vec::new(),
            iterations: 0,
            log2_correction: f64::NEG_INFINITY,
        });
    }
    let approx: Vec<f64> = coeffs
        .iter()
        .map(|c| f64::from_rational_prec(c, 53))
        .collect();
    // The warm start only has to land inside the basins; it is allowed to
    // stall at f64 resolution.
    let warm = aberth(
        &approx,
        initial_guesses(&approx, seed),
        -40.0,
        ITERATION_CAP,
    );

    let wp = working_bits;
    let exact: Vec<R> = coeffs
        .iter()
        .map(|c| R::from_rational_prec(c, wp))
        .collect();
    let lifted: Vec<Complex<R>> = warm
        .roots
        .iter()
        .map(|z| Complex::new(R::from_f64_prec(z.re, wp), R::from_f64_prec(z.im, wp)))
        .collect();
    let refine = aberth(
        &exact,
        lifted,
        -((wp as f64) - 24.0),
        ITERATION_CAP - warm.iterations.min(ITERATION_CAP - 20),
    );
    if !refine.converged {
        return Err(Error::NoConvergence {
            iterations: warm.iterations + refine.iterations,
            log2_correction: refine.log2_correction,
        });
    }

    let mut roots = refine.roots;
    let mut worst = f64::NEG_INFINITY;
    for z in roots.iter_mut() {
        let mut last = f64::INFINITY;
        for _ in 0..4 {
            let (p, dp) = horner(&exact, z);
            if p.is_zero() {
                last = f64::NEG_INFINITY;
                break;
            }
            let step = p / dp;
            let size = log2_cabs(&step) - log2_cabs(z).max(0.0);
            if size >= last {
                // rounding noise; keep the previous iterate
                break;
            }
            *z = z.clone() - step;
            last = size;
        }
        worst = worst.max(last);
    }
    let allowed = -((precision_bits as f64) - 16.0);
    if worst > allowed {
        return Err(Error::NoConvergence {
            iterations: warm.iterations + refine.iterations,
            log2_correction: worst,
        });
    }
    Ok(PolishedRoots {
        roots,
        iterations: warm.iterations + refine.iterations,
        log2_correction: worst,
    })
}

/// `e^{2 s eta} = e^{-2 pi i/L}` and `e^{2 eta} = e^{2 pi i/L}`.
fn phases<R: RealScalar>(l: u32, prec: usize) -> (Complex<R>, Complex<R>) {
    let theta = R::pi_prec(prec) * R::from_i64_prec(2, prec) / R::from_i64_prec(i64::from(l), prec);
    (cis(&-theta.clone()), cis(&theta))
}

/// `w = (z e^{2 s eta} - 1)/(z - e^{2 s eta})`. Fails within `2^-(P/2)` of
/// the pole.
pub fn z_to_w<R: RealScalar>(z: &Complex<R>, l: u32) -> Result<Complex<R>> {
    let prec = z.re.precision().max(z.im.precision());
    let (q, _) = phases::<R>(l, prec);
    let den = z.clone() - q.clone();
    let bits = prec / 2;
    if log2_cabs(&den) < -(bits as f64) {
        return Err(Error::PoleProximity { bits });
    }
    Ok((z.clone() * q - Complex::new(R::one(), R::zero())) / den)
}

/// `z = (w - e^{-2 s eta})/(e^{-2 s eta} w - 1)`, the printed direction.
pub fn w_to_z<R: RealScalar>(w: &Complex<R>, l: u32) -> Complex<R> {
    let prec = w.re.precision().max(w.im.precision());
    let (q, _) = phases::<R>(l, prec);
    let qinv = q.conj();
    (w.clone() - qinv.clone()) / (qinv * w.clone() - Complex::new(R::one(), R::zero()))
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub params: ChainParams,
    pub z_roots: Vec<PrecisionComplex>,
    pub w_roots: Vec<PrecisionComplex>,
    /// Requested precision; tolerances are stated relative to it.
    pub precision_bits: usize,
    /// Precision the roots are actually carried at.
    pub working_bits: usize,
    pub iterations: usize,
    pub log2_correction: f64,
    pub max_poly_residual: BigReal,
    pub max_bae_residual: BigReal,
}

impl RootSet {
    pub fn bae(&self) -> Result<BaeResiduals<BigReal>> {
        bae_residual(self.params, &self.z_roots, &self.w_roots)
    }
}

/// Ascending coefficients of `Q(z) = sum_k (-1)^k e_k z^(p-k)`.
pub fn ascending_coefficients(q: &QPolynomial) -> Vec<BigRational> {
    let p = q.degree();
    (0..=p).map(|i| q.signed(p - i)).collect()
}

/// `find_roots`: every zero of `Q`, mapped to `w`, with both residuals.
pub fn find_roots(q: &QPolynomial, precision_bits: usize) -> Result<RootSet> {
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::Precision(precision_bits, MIN_PRECISION_BITS));
    }
    let params = *q.params();
    let coeffs = ascending_coefficients(q);
    let working_bits = precision_bits + GUARD_BITS;
    let seed = SEED ^ (u64::from(params.l()) << 32) ^ u64::from(params.n());
    let found = polynomial_roots::<BigReal>(&coeffs, precision_bits, working_bits, seed)?;
    let exact: Vec<BigReal> = coeffs
        .iter()
        .map(|c| BigReal::from_rational_prec(c, working_bits))
        .collect();
    let max_poly_residual = found.roots.iter().map(|z| cabs(&horner(&exact, z).0)).fold(
        BigReal::from_i64_prec(0, working_bits),
        |a, b| if b > a { b } else { a },
    );
    let w_roots = found
        .roots
        .iter()
        .map(|z| z_to_w(z, params.l()))
        .collect::<Result<Vec<_>>>()?;
    let bae = bae_residual(params, &found.roots, &w_roots)?;
    Ok(RootSet {
        params,
        max_bae_residual: bae.max(),
        z_roots: found.roots,
        w_roots,
        precision_bits,
        working_bits,
        iterations: found.iterations,
        log2_correction: found.log2_correction,
        max_poly_residual,
    })
}

#[derive(Clone, Debug)]
pub struct BaeResiduals<R> {
    /// `max_j |w_j^M - prod_k (z_j e^{2eta} - z_k)/(z_j - z_k e^{2eta})|`
    pub z_form: R,
    /// The same equations written directly in `w` with hyperbolic sines.
    pub w_form: R,
}

impl<R: RealScalar> BaeResiduals<R> {
    pub fn max(&self) -> R {
        if self.z_form > self.w_form {
            self.z_form.clone()
        } else {
            self.w_form.clone()
        }
    }
}

fn max_of<R: RealScalar>(xs: impl Iterator<Item = R>, prec: usize) -> R {
    xs.fold(R::from_i64_prec(0, prec), |a, b| if b > a { b } else { a })
}

/// Bethe-equation residuals of a candidate root set in both forms.
/// Roots closer than `2^-(P/2)` are reported as coincident.
pub fn bae_residual<R: RealScalar>(
    params: ChainParams,
    z: &[Complex<R>],
    w: &[Complex<R>],
) -> Result<BaeResiduals<R>> {
    let p = z.len();
    if w.len() != p {
        return Err(Error::Shape(format!(
            "{} z roots but {} w roots",
            p,
            w.len()
        )));
    }
    let Some(first) = z.first() else {
        let zero = R::from_i64_prec(0, MIN_PRECISION_BITS);
        return Ok(BaeResiduals {
            z_form: zero.clone(),
            w_form: zero,
        });
    };
    let prec = first.re.precision();
    let tight = -((prec / 2) as f64);
    for j in 0..p {
        for k in j + 1..p {
            if log2_cabs(&(z[j].clone() - z[k].clone())) < tight {
                return Err(Error::CoincidentRoots(j, k));
            }
        }
    }
    let m = params.sites();
    let l = i64::from(params.l());
    let (_, e2eta) = phases::<R>(params.l(), prec);

    // sh(a eta) = -i sin(a (L-1) pi / L); the common -i cancels in every ratio.
    let sh = |a: i64| {
        let x = R::pi_prec(prec) * R::from_i64_prec(a * (l - 1), prec) / R::from_i64_prec(l, prec);
        Complex::new(x.sin(), R::zero())
    };
    let (s1, s_plus, s_minus) = (sh(1), sh(l - 1), sh(l - 3));

    let lhs: Vec<Complex<R>> = w.iter().map(|wj| wj.powu(m)).collect();
    let z_form = max_of(
        (0..p).map(|j| {
            let rhs =
                (0..p)
                    .filter(|&k| k != j)
                    .fold(Complex::new(R::one(), R::zero()), |acc, k| {
                        acc * ((z[j].clone() * e2eta.clone() - z[k].clone())
                            / (z[j].clone() - z[k].clone() * e2eta.clone()))
                    });
            cabs(&(lhs[j].clone() - rhs))
        }),
        prec,
    );
    let w_form = max_of(
        (0..p).map(|j| {
            let rhs =
                (0..p)
                    .filter(|&k| k != j)
                    .fold(Complex::new(R::one(), R::zero()), |acc, k| {
                        let (a, b) = (&w[j], &w[k]);
                        let ab = a.clone() * b.clone();
                        let num = s1.clone() * ab.clone() - s_plus.clone() * a.clone()
                            + s_minus.clone() * b.clone()
                            + s1.clone();
                        let den = s1.clone() * ab - s_plus.clone() * b.clone()
                            + s_minus.clone() * a.clone()
                            + s1.clone();
                        acc * -(num / den)
                    });
            cabs(&(lhs[j].clone() - rhs))
        }),
        prec,
    );
    Ok(BaeResiduals { z_form, w_form })
}

/// Bound used for the Bethe equations, the sums and the root product:
/// `2^-(P - 40)`.
pub fn agreement_log2_bound(precision_bits: usize) -> f64 {
    -((precision_bits as f64) - 40.0)
}

/// Bound on `|Q(z_j)|`: `2^-(P - 24)`.
pub fn poly_log2_bound(precision_bits: usize) -> f64 {
    -((precision_bits as f64) - 24.0)
}

fn numeric_entry(
    name: &str,
    params: &ChainParams,
    gap: &BigReal,
    bound: f64,
    what: &str,
) -> CheckEntry {
    let log2 = gap.log2_abs();
    CheckEntry::new(
        name,
        log2 < bound,
        Residual::numeric(log2, format_decimal(&gap.to_rational(), 6)),
        format!("{what}: 2^{log2:.1} against bound 2^{bound:.0}"),
    )
    .at(params)
}

/// `|sum w_j - E_1|` and `|sum 1/w_j - E_1|` against the exact value.
pub fn numeric_cross_check(rs: &RootSet, ws: &WSymmetrics) -> Vec<CheckEntry> {
    let bound = agreement_log2_bound(rs.precision_bits);
    let e1: PrecisionComplex = embed(&ws.e1, rs.working_bits);
    let zero = Complex::new(
        BigReal::from_i64_prec(0, rs.working_bits),
        BigReal::from_i64_prec(0, rs.working_bits),
    );
    let one = Complex::new(BigReal::one(), BigReal::zero());
    let sum = rs.w_roots.iter().fold(zero.clone(), |a, w| a + w.clone());
    let inv = rs
        .w_roots
        .iter()
        .fold(zero, |a, w| a + one.clone() / w.clone());
    let digits = |g: &BigReal| {
        (-g.log2_abs() * std::f64::consts::LOG10_2)
            .floor()
            .min(999.0)
    };
    let gap_sum = cabs(&(sum - e1.clone()));
    let gap_inv = cabs(&(inv - e1));
    let mut a = numeric_entry("roots-sum", &rs.params, &gap_sum, bound, "|sum w_j - E_1|");
    a.detail = format!("{} ({} digits)", a.detail, digits(&gap_sum));
    let b = numeric_entry(
        "roots-inverse-sum",
        &rs.params,
        &gap_inv,
        bound,
        "|sum 1/w_j - E_1|",
    );
    vec![a, b]
}

/// Every numeric check for one grid point: polynomial residual, both Bethe
/// forms, inversion closure, root product, and the sums.
pub fn verify_roots(q: &QPolynomial, ws: &WSymmetrics, precision_bits: usize) -> Vec<CheckEntry> {
    let params = *q.params();
    let rs = match find_roots(q, precision_bits) {
        Ok(rs) => rs,
        Err(e) => {
            return vec![
                CheckEntry::new("roots", false, Residual::None, e.to_string()).at(&params),
            ];
        }
    };
    let bound = agreement_log2_bound(precision_bits);
    let mut out = vec![numeric_entry(
        "roots-poly",
        &params,
        &rs.max_poly_residual,
        poly_log2_bound(precision_bits),
        "max |Q(z_j)|",
    )];
    match rs.bae() {
        Ok(b) => {
            out.push(numeric_entry(
                "roots-bae-z",
                &params,
                &b.z_form,
                bound,
                "Bethe equations in z",
            ));
            out.push(numeric_entry(
                "roots-bae-w",
                &params,
                &b.w_form,
                bound,
                "Bethe equations in w",
            ));
        }
        Err(e) => {
            out.push(CheckEntry::new("roots-bae", false, Residual::None, e.to_string()).at(&params))
        }
    }

    let wp = rs.working_bits;
    let one = Complex::new(BigReal::one(), BigReal::zero());
    let closure = max_of(
        rs.z_roots.iter().map(|z| {
            let inv = one.clone() / z.clone();
            min_of(rs.z_roots.iter().map(|y| cabs(&(inv.clone() - y.clone()))))
        }),
        wp,
    );
    out.push(numeric_entry(
        "roots-inversion",
        &params,
        &closure,
        bound,
        "max_j min_k |1/z_j - z_k|",
    ));

    let product = rs.z_roots.iter().fold(one, |a, z| a * z.clone());
    let sign = if params.roots().is_multiple_of(2) {
        1
    } else {
        -1
    };
    let gap = cabs(&(product - Complex::new(BigReal::from_i64_prec(sign, wp), BigReal::zero())));
    out.push(numeric_entry(
        "roots-product",
        &params,
        &gap,
        bound,
        "|prod z_j - (-1)^p|",
    ));
    out.extend(numeric_cross_check(&rs, ws));
    out
}

fn min_of<R: RealScalar>(mut xs: impl Iterator<Item = R>) -> R {
    let first = xs.next().expect("at least one root");
    xs.fold(first, |a, b| if b < a { b } else { a })
}
