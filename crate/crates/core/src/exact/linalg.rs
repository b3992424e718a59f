//! Fraction-free (Bareiss) elimination and exact rational solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use super::{BitSize, ExactScalar};
use crate::error::{Error, Result};

/// Bareiss forward elimination over an integral domain, in place. Pivots
/// are searched in the first `cols` columns; every column of each row is
/// updated, so an augmented right-hand side rides along. Returns the rank.
///
/// Pivot rule: among the nonzero candidates in the current column pick the
/// one with the fewest bits, the first such on ties. Every division is exact.
pub fn bareiss_eliminate<T>(m: &mut [Vec<T>], cols: usize) -> usize
where
    T: ExactScalar + BitSize,
{
    let rows = m.len();
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].bit_size());
        let Some(pivot) = pivot else { continue };
        m.swap(r, pivot);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in (c + 1)..row.len() {
                row[j] =
                    (prow[c].clone() * row[j].clone() - f.clone() * prow[j].clone()) / prev.clone();
            }
            row[c] = T::zero();
        }
        prev = prow[c].clone();
        r += 1;
    }
    r
}

/// Solves a square integer system `a x = b` exactly over the fraction field.
pub fn solve_integer_system<T>(a: &[Vec<T>], b: &[T]) -> Result<Vec<Ratio<T>>>
where
    T: ExactScalar + BitSize + Integer,
{
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!(
            "expected {n}x{n} system with {n} right-hand sides"
        )));
    }
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let rank = bareiss_eliminate(&mut aug, n);
    if rank < n {
        return Err(Error::SingularMatrix { rank, size: n });
    }
    let mut x: Vec<Ratio<T>> = vec![Ratio::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Ratio::from_integer(aug[i][n].clone());
        for j in (i + 1)..n {
            if !aug[i][j].is_zero() {
                acc = acc - Ratio::from_integer(aug[i][j].clone()) * x[j].clone();
            }
        }
        x[i] = acc / Ratio::from_integer(aug[i][i].clone());
    }
    Ok(x)
}

/// Exact solution of the square rational system `a x = b`.
///
/// Each row is cleared of denominators, eliminated fraction-free over the
/// integers, back-substituted, and the result checked by substitution.
pub fn solve_linear_system(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!(
            "expected {n}x{n} system with {n} right-hand sides"
        )));
    }
    let mut ia = Vec::with_capacity(n);
    let mut ib = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b) {
        let lcm = row
            .iter()
            .chain(std::iter::once(rhs))
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scale = |q: &BigRational| q.numer() * (&lcm / q.denom());
        ia.push(row.iter().map(scale).collect::<Vec<_>>());
        ib.push(scale(rhs));
    }
    let x = solve_integer_system(&ia, &ib)?;
    assert!(residual_is_zero(a, b, &x), "back-substitution check failed");
    Ok(x)
}

fn residual_is_zero(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) -> bool {
    a.iter().zip(b).all(|(row, rhs)| {
        let lhs = row
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (aij, xj)| acc + aij * xj);
        &lhs == rhs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn identity_returns_rhs() {
        let n = 4;
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { int(1) } else { int(0) })
                    .collect()
            })
            .collect();
        let b = vec![rat(1, 2), int(-3), rat(7, 9), int(0)];
        assert_eq!(solve_linear_system(&a, &b).unwrap(), b);
    }

    #[test]
    fn one_by_one() {
        assert_eq!(
            solve_linear_system(&[vec![int(3)]], &[int(-3)]).unwrap(),
            vec![int(-1)]
        );
    }

    #[test]
    fn needs_row_swap() {
        let a = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        let b = vec![int(5), int(3)];
        assert_eq!(
            solve_linear_system(&a, &b).unwrap(),
            vec![rat(3, 2), int(5)]
        );
    }

    #[test]
    fn singular_reports_rank() {
        let a = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(1), int(0), int(1)],
        ];
        let b = vec![int(1), int(2), int(3)];
        assert_eq!(
            solve_linear_system(&a, &b),
            Err(Error::SingularMatrix { rank: 2, size: 3 })
        );
    }

    #[test]
    fn generic_over_machine_integers() {
        let a = vec![vec![2i64, 1], vec![1, 3]];
        let x = solve_integer_system(&a, &[3, 5]).unwrap();
        assert_eq!(x, vec![Ratio::new(4, 5), Ratio::new(7, 5)]);
    }

    #[test]
    fn bareiss_last_pivot_is_determinant() {
        let mut m = vec![vec![2i64, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(bareiss_eliminate(&mut m, 3), 3);
        assert_eq!(m[2][2].abs(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_5x5_residual_is_zero(entries in proptest::collection::vec((-30i64..30, 1i64..8), 25),
                                       rhs in proptest::collection::vec((-30i64..30, 1i64..8), 5)) {
            let a: Vec<Vec<BigRational>> = entries.chunks(5)
                .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect()).collect();
            let b: Vec<BigRational> = rhs.iter().map(|&(n, d)| rat(n, d)).collect();
            match solve_linear_system(&a, &b) {
                Ok(x) => prop_assert!(residual_is_zero(&a, &b, &x)),
                Err(Error::SingularMatrix { rank, size }) => prop_assert!(rank < size),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
