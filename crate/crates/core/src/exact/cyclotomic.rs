//! The cyclotomic field `Q(zeta_n)`, `zeta = e^{2 pi i / n}`.
//!
//! Elements are coefficient vectors of length `phi(n)` in the power basis
//! `1, zeta, ..., zeta^{phi(n)-1}`, reduced modulo the monic `Phi_n`. The
//! representative is canonical, so equality is coefficient equality.
//!
//! For the spin chain the field is always `Q(zeta_{2L})` with `L` odd, where
//! `zeta = e^{i pi / L}`; [`cyc_cos`] and [`cyc_root_of_unity`] build the
//! constants in that setting.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{cyclotomic_polynomial, Polynomial};
use super::ExactScalar;
use crate::error::{Error, Result};

/// Modulus and power table for one cyclotomic order.
#[derive(Debug)]
pub struct CyclotomicField<T> {
    order: u32,
    modulus: Polynomial<T>,
    /// `zeta^k mod Phi_n` for `k = 0..n`.
    powers: Vec<Vec<T>>,
}

impl<T: ExactScalar> CyclotomicField<T> {
    pub fn new(order: u32) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus = cyclotomic_polynomial::<T>(order);
        let deg = modulus.degree().expect("Phi_n is nonzero");
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![T::zero(); deg];
        if deg > 0 {
            cur[0] = T::one();
        }
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by zeta: shift, then fold the overflow back with Phi_n
            let top = cur.pop().unwrap_or_else(T::zero);
            cur.insert(0, T::zero());
            if !top.is_zero() {
                for (i, m) in modulus.coeffs()[..deg].iter().enumerate() {
                    cur[i] = cur[i].clone() - top.clone() * m.clone();
                }
            }
        }
        Arc::new(CyclotomicField {
            order,
            modulus,
            powers,
        })
    }

    /// `Q(zeta_{2L})`, the home of every constant in the chain at spin
    /// `(L-2)/2`.
    pub fn for_chain(l: u32) -> Arc<Self> {
        Self::new(2 * l)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(n)`, the dimension over the rationals.
    pub fn degree(&self) -> usize {
        self.powers[0].len()
    }

    pub fn modulus(&self) -> &Polynomial<T> {
        &self.modulus
    }

    fn wrap(self: &Arc<Self>, coeffs: Vec<T>) -> Cyclotomic<T> {
        debug_assert_eq!(coeffs.len(), self.degree());
        Cyclotomic {
            field: Arc::clone(self),
            coeffs,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic<T> {
        self.wrap(vec![T::zero(); self.degree()])
    }

    pub fn one(self: &Arc<Self>) -> Cyclotomic<T> {
        self.from_scalar(T::one())
    }

    pub fn from_scalar(self: &Arc<Self>, c: T) -> Cyclotomic<T> {
        let mut coeffs = vec![T::zero(); self.degree()];
        coeffs[0] = c;
        self.wrap(coeffs)
    }

    /// Reduces an arbitrary polynomial in `zeta` into the field.
    pub fn from_poly_coeffs(self: &Arc<Self>, coeffs: &[T]) -> Cyclotomic<T> {
        let mut out = vec![T::zero(); self.degree()];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pk = &self.powers[k % self.order as usize];
            for (o, p) in out.iter_mut().zip(pk) {
                if !p.is_zero() {
                    *o = o.clone() + c.clone() * p.clone();
                }
            }
        }
        self.wrap(out)
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> Cyclotomic<T> {
        let n = i64::from(self.order);
        self.wrap(self.powers[k.rem_euclid(n) as usize].clone())
    }

    /// `cos(2 pi m / n) = (zeta^m + zeta^-m) / 2`.
    pub fn zeta_cos(self: &Arc<Self>, m: i64) -> Cyclotomic<T> {
        let two = T::one() + T::one();
        (self.zeta_pow(m) + self.zeta_pow(-m)).scale(&(T::one() / two))
    }

    /// `i sin(2 pi m / n) = (zeta^m - zeta^-m) / 2`.
    pub fn zeta_i_sin(self: &Arc<Self>, m: i64) -> Cyclotomic<T> {
        let two = T::one() + T::one();
        (self.zeta_pow(m) - self.zeta_pow(-m)).scale(&(T::one() / two))
    }

    /// Folds `sum_k c_k zeta^k` given as `(exponent, coefficient)` buckets.
    pub fn sum_powers<I>(self: &Arc<Self>, terms: I) -> Cyclotomic<T>
    where
        I: IntoIterator<Item = (i64, T)>,
    {
        let n = i64::from(self.order);
        let mut buckets = vec![T::zero(); self.order as usize];
        for (k, c) in terms {
            let i = k.rem_euclid(n) as usize;
            buckets[i] = buckets[i].clone() + c;
        }
        self.from_poly_coeffs(&buckets)
    }
}

/// An element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct Cyclotomic<T> {
    field: Arc<CyclotomicField<T>>,
    coeffs: Vec<T>,
}

impl<T: ExactScalar> Cyclotomic<T> {
    pub fn field(&self) -> &Arc<CyclotomicField<T>> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Power-basis coordinates, length `phi(n)`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in the prime field.
    pub fn as_scalar(&self) -> Option<&T> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coeffs[0])
    }

    fn same_field(&self, rhs: &Self) -> Result<()> {
        if self.field.order == rhs.field.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.field.order, rhs.field.order))
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.field.wrap(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.field.wrap(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        let d = self.field.degree();
        if d == 1 {
            return Ok(self
                .field
                .wrap(vec![self.coeffs[0].clone() * rhs.coeffs[0].clone()]));
        }
        let mut prod = vec![T::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = prod[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        // Phi_n is monic: eliminate the top coefficients downwards
        let m = self.field.modulus.coeffs();
        for top in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[top], T::zero());
            if c.is_zero() {
                continue;
            }
            for (i, mi) in m[..d].iter().enumerate() {
                if !mi.is_zero() {
                    prod[top - d + i] = prod[top - d + i].clone() - c.clone() * mi.clone();
                }
            }
        }
        prod.truncate(d);
        Ok(self.field.wrap(prod))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_n`, which is irreducible over the rationals.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = Polynomial::new(self.coeffs.clone());
        let (mut r0, mut r1) = (self.field.modulus.clone(), a);
        let (mut s0, mut s1) = (Polynomial::<T>::zero(), Polynomial::<T>::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is the (constant) gcd; s0 * a = r0 mod Phi_n
        debug_assert_eq!(r0.degree(), Some(0));
        let g = r0.coeff(0);
        let inv = s0.scale(&(T::one() / g));
        Ok(self.field.from_poly_coeffs(inv.coeffs()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        self.checked_mul(&rhs.inverse()?)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.field
            .wrap(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugation, the automorphism `zeta -> zeta^{-1}`.
    pub fn conjugate(&self) -> Self {
        let n = self.field.order as i64;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| ((n - k as i64) % n, c.clone()));
        self.field.sum_powers(terms)
    }

    /// True iff fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }
}

impl<T: PartialEq> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl<T: Eq> Eq for Cyclotomic<T> {}

impl<T: fmt::Debug> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cyclotomic")
            .field("order", &self.field.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<T: ExactScalar + fmt::Display> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [z = zeta_{}]", self.field.order)
    }
}

// Operator forms panic on mismatched orders; use the `checked_*` methods
// where the orders are not known to agree.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<T: ExactScalar> $tr for &Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $m(self, rhs: Self) -> Cyclotomic<T> {
                self.$checked(rhs)
                    .expect("cyclotomic operands of different order")
            }
        }
        impl<T: ExactScalar> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $m(self, rhs: Self) -> Cyclotomic<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: ExactScalar> $tr<&Cyclotomic<T>> for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $m(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$m(rhs)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<T: ExactScalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        self.field
            .wrap(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: ExactScalar> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

/// Checks that `l` is an odd integer at least 3.
pub(crate) fn check_odd_l(l: u32) -> Result<()> {
    if l >= 3 && l % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("L must be odd >= 3, got {l}")))
    }
}

/// `cos(pi m / L)` in `Q(zeta_{2L})`.
pub fn cyc_cos(m: i64, l: u32) -> Result<Cyclotomic<BigRational>> {
    check_odd_l(l)?;
    Ok(CyclotomicField::for_chain(l).zeta_cos(m))
}

/// `e^{2 pi i k / L} = zeta^{2k}` in `Q(zeta_{2L})`.
pub fn cyc_root_of_unity(k: i64, l: u32) -> Result<Cyclotomic<BigRational>> {
    check_odd_l(l)?;
    Ok(CyclotomicField::for_chain(l).zeta_pow(2 * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use num_rational::Rational64;
    use proptest::prelude::*;

    type Q = BigRational;

    #[test]
    fn field_shapes() {
        let f = CyclotomicField::<Q>::for_chain(5);
        assert_eq!(f.order(), 10);
        assert_eq!(f.degree(), 4);
        assert_eq!(CyclotomicField::<Q>::for_chain(11).degree(), 10);
        assert_eq!(CyclotomicField::<Q>::for_chain(3).degree(), 2);
        assert_eq!(f.zeta_pow(10), f.one());
        assert_eq!(f.zeta_pow(5), -f.one());
        assert_eq!(f.zeta_pow(-1) * f.zeta_pow(1), f.one());
    }

    #[test]
    fn cosines() {
        assert_eq!(cyc_cos(0, 5).unwrap(), CyclotomicField::for_chain(5).one());
        let c = cyc_cos(1, 3).unwrap();
        assert_eq!(c.as_scalar(), Some(&rat(1, 2)));
        // 4c^2 + 2c - 1 = 0 for c = cos(2 pi / 5)
        let c = cyc_cos(2, 5).unwrap();
        let f = c.field().clone();
        let rel = c.pow(2).scale(&int(4)) + c.scale(&int(2)) - f.one();
        assert!(rel.is_zero());
        assert!(c.is_real());
        assert!(cyc_cos(2, 7).unwrap().is_real());
        assert!(cyc_cos(1, 4).is_err());
    }

    #[test]
    fn roots_of_unity() {
        let f = CyclotomicField::<Q>::for_chain(7);
        assert_eq!(cyc_root_of_unity(0, 7).unwrap(), f.one());
        let w = cyc_root_of_unity(1, 3).unwrap();
        let g = w.field().clone();
        assert!((w.pow(2) + w.clone() + g.one()).is_zero());
        for l in [3u32, 5, 7, 9, 11] {
            let w = cyc_root_of_unity(1, l).unwrap();
            assert!(w.pow(l).is_one());
            assert!(!w.is_real());
        }
        assert_eq!(
            cyc_root_of_unity(-1, 5).unwrap(),
            cyc_root_of_unity(1, 5).unwrap().conjugate()
        );
    }

    #[test]
    fn arithmetic_identities() {
        let f = CyclotomicField::<Q>::for_chain(5);
        let a = f.zeta_pow(3).scale(&rat(2, 7)) + f.from_scalar(rat(-1, 3));
        assert_eq!(&a + &f.zero(), a);
        assert_eq!(&a * &f.one(), a);
        let c = cyc_cos(1, 5).unwrap().scale(&int(2));
        assert!((c - (f.zeta_pow(1) + f.zeta_pow(9))).is_zero());
    }

    #[test]
    fn inverses() {
        let f = CyclotomicField::<Q>::for_chain(3);
        assert_eq!(f.one().inverse().unwrap(), f.one());
        assert_eq!(
            f.from_scalar(int(2)).inverse().unwrap(),
            f.from_scalar(rat(1, 2))
        );
        assert_eq!(
            cyc_cos(1, 3).unwrap().inverse().unwrap(),
            f.from_scalar(int(2))
        );
        assert_eq!(f.zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn order_mismatch() {
        let a = CyclotomicField::<Q>::for_chain(3).one();
        let b = CyclotomicField::<Q>::for_chain(5).one();
        assert_eq!(a.checked_add(&b), Err(Error::OrderMismatch(6, 10)));
        assert_eq!(a.checked_mul(&b), Err(Error::OrderMismatch(6, 10)));
    }

    #[test]
    fn conjugation_basics() {
        let f = CyclotomicField::<Q>::for_chain(7);
        let x = f.from_scalar(rat(3, 7));
        assert_eq!(x.conjugate(), x);
        assert!(x.is_real());
        assert!(!cyc_root_of_unity(1, 5).unwrap().is_real());
    }

    #[test]
    fn generic_over_small_rationals() {
        let f = CyclotomicField::<Rational64>::new(12);
        let z = f.zeta_pow(1);
        // zeta_12^4 - zeta_12^2 + 1 = 0
        assert!((z.pow(4) - z.pow(2) + f.one()).is_zero());
        let inv = z.inverse().unwrap();
        assert_eq!(inv, f.zeta_pow(11));
    }

    fn element(l: u32) -> impl Strategy<Value = Cyclotomic<Q>> {
        let f = CyclotomicField::<Q>::for_chain(l);
        let d = f.degree();
        proptest::collection::vec((-20i64..20, 1i64..6), d).prop_map(move |v| {
            f.from_poly_coeffs(&v.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in element(7), b in element(7), c in element(7)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn conjugation_is_involutive_homomorphism(a in element(9), b in element(9)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
            prop_assert!((&a + &a.conjugate()).is_real());
        }

        #[test]
        fn coefficients_stay_reduced(a in element(5), b in element(5)) {
            for c in (&a * &b).coeffs() {
                prop_assert!(num_integer::Integer::gcd(c.numer(), c.denom()) == num_bigint::BigInt::from(1));
                prop_assert!(c.denom() > &num_bigint::BigInt::from(0));
            }
        }
    }
}
