use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::primes::PrimeTable;

/// A finite window of positive rationals: reduced `n/d` with `n` and `d`
/// bounded and every prime factor of `d` among the first `prime_index_bound`
/// primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseSpec {
    pub prime_index_bound: usize,
    pub numerator_bound: u64,
    pub denominator_bound: u64,
    pub integers_only: bool,
}

impl UniverseSpec {
    pub fn naturals(bound: u64) -> Self {
        UniverseSpec { prime_index_bound: 1, numerator_bound: bound, denominator_bound: 1, integers_only: true }
    }

    /// Elements ordered by denominator, then numerator.
    pub fn elements(&self, table: &PrimeTable) -> Result<Vec<Rational>> {
        if self.numerator_bound == 0 || self.denominator_bound == 0 {
            return Err(Error::domain("universe bounds must be positive"));
        }
        let k = self.prime_index_bound.min(table.len());
        if self.prime_index_bound > table.len() {
            return Err(Error::PrimeIndex { index: self.prime_index_bound, max: table.len() });
        }
        let primes = &table.primes()[..k];
        let max_den = if self.integers_only { 1 } else { self.denominator_bound };
        let mut out = Vec::new();
        for d in 1..=max_den {
            let mut rest = d;
            for &p in primes {
                while rest % p == 0 {
                    rest /= p;
                }
            }
            if rest != 1 {
                continue;
            }
            for n in 1..=self.numerator_bound {
                if n.gcd(&d) == 1 {
                    out.push(Rational::from_parts(n, d)?);
                }
            }
        }
        Ok(out)
    }
}
