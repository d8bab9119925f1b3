//! Prime table and primorials `P_n = p_1 * ... * p_n`.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;

pub const DEFAULT_PRIME_COUNT: usize = 64;

/// The first `count` primes from a sieve; primorials are built on first use.
#[derive(Debug)]
pub struct PrimeTable {
    primes: Vec<u64>,
    primorials: Vec<OnceLock<BigUint>>,
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

impl PrimeTable {
    pub fn new(count: usize) -> Self {
        let count = count.max(1);
        // p_n < n (ln n + ln ln n) for n >= 6
        let n = count.max(6) as f64;
        let mut limit = (n * (n.ln() + n.ln().ln())).ceil() as usize + 16;
        let mut primes = sieve(limit);
        while primes.len() < count {
            limit *= 2;
            primes = sieve(limit);
        }
        primes.truncate(count);
        let primorials = (0..count).map(|_| OnceLock::new()).collect();
        PrimeTable { primes, primorials }
    }

    /// Shared table of the default size.
    pub fn default_shared() -> Arc<PrimeTable> {
        static TABLE: OnceLock<Arc<PrimeTable>> = OnceLock::new();
        TABLE.get_or_init(|| Arc::new(PrimeTable::new(DEFAULT_PRIME_COUNT))).clone()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.primes.len() {
            Err(Error::PrimeIndex { index: n, max: self.primes.len() })
        } else {
            Ok(())
        }
    }

    /// `p_n`, with `p_1 = 2`.
    pub fn nth_prime(&self, n: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.primes[n - 1])
    }

    /// `P_n`.
    pub fn primorial(&self, n: usize) -> Result<&BigUint> {
        self.check(n)?;
        Ok(self.primorials[n - 1].get_or_init(|| {
            self.primes[..n].iter().fold(BigUint::one(), |acc, &p| acc * p)
        }))
    }

    /// Largest prime index dividing `m` (0 when `m == 1`), or an error when
    /// `m` has a prime factor outside the table.
    pub fn max_prime_index(&self, m: &BigUint, shown: &dyn std::fmt::Display) -> Result<usize> {
        let mut rest = m.clone();
        let mut idx = 0;
        for (i, &p) in self.primes.iter().enumerate() {
            if rest.is_one() {
                break;
            }
            // what is left is prime once it drops below p^2
            if rest < BigUint::from(p) * p {
                return match u64::try_from(&rest).ok().and_then(|r| self.primes.binary_search(&r).ok()) {
                    Some(j) => Ok(j + 1),
                    None => Err(Error::UnsupportedPrime { value: shown.to_string(), table: self.primes.len() }),
                };
            }
            let p = BigUint::from(p);
            let mut hit = false;
            loop {
                let (q, r) = rest.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                hit = true;
            }
            if hit {
                idx = i + 1;
            }
        }
        if rest.is_one() {
            Ok(idx)
        } else {
            Err(Error::UnsupportedPrime { value: shown.to_string(), table: self.primes.len() })
        }
    }

    /// Smallest `n` such that `x` terminates in base `P_n`; 1 for integers.
    pub fn minimal_base_index(&self, x: &Rational) -> Result<usize> {
        Ok(self.max_prime_index(x.denom(), x)?.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes_and_primorials() {
        let t = PrimeTable::new(DEFAULT_PRIME_COUNT);
        assert_eq!(t.len(), 64);
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert_eq!(t.nth_prime(2).unwrap(), 3);
        assert_eq!(t.nth_prime(3).unwrap(), 5);
        assert_eq!(t.nth_prime(64).unwrap(), 311);
        assert_eq!(t.primorial(1).unwrap(), &BigUint::from(2u32));
        assert_eq!(t.primorial(2).unwrap(), &BigUint::from(6u32));
        assert_eq!(t.primorial(3).unwrap(), &BigUint::from(30u32));
        assert!(matches!(t.nth_prime(0), Err(Error::PrimeIndex { .. })));
        assert!(matches!(t.nth_prime(65), Err(Error::PrimeIndex { .. })));
    }

    #[test]
    fn larger_tables_extend_the_sieve() {
        let t = PrimeTable::new(1000);
        assert_eq!(t.nth_prime(1000).unwrap(), 7919);
    }

    #[test]
    fn minimal_base_examples() {
        let t = PrimeTable::default_shared();
        let q = |s: &str| s.parse::<Rational>().unwrap();
        assert_eq!(t.minimal_base_index(&q("1/2")).unwrap(), 1);
        assert_eq!(t.minimal_base_index(&q("5/6")).unwrap(), 2);
        assert_eq!(t.minimal_base_index(&q("1/96")).unwrap(), 2);
        assert_eq!(t.minimal_base_index(&q("7")).unwrap(), 1);
        assert_eq!(t.minimal_base_index(&q("1/9")).unwrap(), 2);
        assert_eq!(t.minimal_base_index(&q("1/311")).unwrap(), 64);
        assert!(matches!(
            t.minimal_base_index(&q("1/313")),
            Err(Error::UnsupportedPrime { .. })
        ));
    }
}
