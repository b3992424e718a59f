use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Chain of spin `s = (L-2)/2` on `M = 2N+1` sites, `S_z = 1/2` sector
/// (`m = 0`), at `eta = -(L-1) pi i / L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainParams {
    l: u32,
    n: u32,
}

impl ChainParams {
    pub fn new(l: u32, n: u32) -> Result<Self> {
        if l < 3 || l.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("L must be odd >= 3, got {l}")));
        }
        if n < 1 {
            return Err(Error::InvalidParams(format!("N must be >= 1, got {n}")));
        }
        Ok(ChainParams { l, n })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of sites `M = 2N + 1`.
    pub fn sites(&self) -> u32 {
        2 * self.n + 1
    }

    /// Number of Bethe roots `p = N + (2N+1)(L-3)/2 = N(L-2) + (L-3)/2`.
    pub fn roots(&self) -> usize {
        (self.n * (self.l - 2) + (self.l - 3) / 2) as usize
    }

    /// `(L-1)/2`
    pub fn half(&self) -> u32 {
        (self.l - 1) / 2
    }

    pub fn spin(&self) -> BigRational {
        BigRational::new((self.l as i64 - 2).into(), 2.into())
    }

    pub fn eta_label(&self) -> String {
        format!("-{}*pi*i/{}", self.l - 1, self.l)
    }
}

impl fmt::Display for ChainParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={}, N={}", self.l, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_counts() {
        let p = ChainParams::new(3, 1).unwrap();
        assert_eq!((p.sites(), p.roots(), p.half()), (3, 1, 1));
        let p = ChainParams::new(5, 2).unwrap();
        assert_eq!((p.sites(), p.roots()), (5, 7));
        let p = ChainParams::new(11, 4).unwrap();
        assert_eq!(p.roots(), 40);
        for l in (3..=15).step_by(2) {
            for n in 1..6 {
                let p = ChainParams::new(l, n).unwrap();
                assert_eq!(p.roots() as u32, n + (2 * n + 1) * (l - 3) / 2);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(ChainParams::new(4, 1).is_err());
        assert!(ChainParams::new(1, 1).is_err());
        assert!(ChainParams::new(3, 0).is_err());
    }
}
