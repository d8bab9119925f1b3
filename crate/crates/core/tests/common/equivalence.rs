//! Seeded agreement runs between the library colourings and the oracles.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{self, big, PhiOracle};
use monochrome::colour;
use monochrome::{PrimeTable, Rational};

const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn natural(rng: &mut ChaCha8Rng, max_bits: u32) -> BigUint {
    let bits = rng.gen_range(1..=max_bits);
    BigUint::from(rng.gen_range(1u64..=u64::MAX >> (64 - bits)))
}

/// Powers of two, two-bit dyadics and runs of ones, at small exponents.
fn special(rng: &mut ChaCha8Rng) -> Rational {
    let k = rng.gen_range(-12i64..12);
    let l = rng.gen_range(k - 10..k);
    let one = Rational::one();
    match rng.gen_range(0..4) {
        0 => one.mul_pow2(k),
        1 => &one.mul_pow2(k) + &one.mul_pow2(l),
        2 => one.mul_pow2(k).checked_sub(&one.mul_pow2(l)).unwrap(),
        _ => Rational::integer(3).unwrap().mul_pow2(k),
    }
}

pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
    match rng.gen_range(0..10) {
        0 | 1 => special(rng),
        2 => Rational::new(natural(rng, 40), BigUint::from(1u32)).unwrap(),
        3 => Rational::one().mul_pow2(-rng.gen_range(1..20)),
        _ => oracle::random_rational(rng, 40, &PRIMES, 6),
    }
}

/// A value in `(0, 1)` with a smooth denominator.
pub fn fraction(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.2) {
        let x = special(rng);
        if x < Rational::one() {
            return x;
        }
    }
    let den: u64 = (0..rng.gen_range(1..=6)).map(|_| PRIMES[rng.gen_range(0..PRIMES.len())]).product();
    let den = den.max(2);
    Rational::from_parts(rng.gen_range(1..den), den).unwrap()
}

fn first_mismatch<T: PartialEq + std::fmt::Debug>(
    seed: u64,
    count: usize,
    mut gen: impl FnMut(&mut ChaCha8Rng) -> (String, T, T),
) -> Result<(), String> {
    let mut rng = super::rng(seed);
    for _ in 0..count {
        let (input, fast, slow) = gen(&mut rng);
        if fast != slow {
            return Err(format!("{input}: library {fast:?}, oracle {slow:?}"));
        }
    }
    Ok(())
}

pub fn phi(seed: u64, count: usize) -> Result<(), String> {
    let table = PhiOracle::new(200_004);
    first_mismatch(seed, count, |rng| {
        let k = rng.gen_range(-100_000i64..=100_000);
        (k.to_string(), colour::phi(k), table.get(k))
    })
}

pub fn big_phi(seed: u64, count: usize) -> Result<(), String> {
    first_mismatch(seed, count, |rng| {
        let a = natural(rng, 48);
        let b = if rng.gen_bool(0.1) { natural(rng, 48) } else { &a + natural(rng, 48) };
        (format!("({a}, {b})"), colour::big_phi(&a, &b), oracle::big_phi_naive(&a, &b))
    })
}

pub fn theta(seed: u64, count: usize) -> Result<(), String> {
    let table = PhiOracle::new(200);
    first_mismatch(seed, count, |rng| {
        let m = if rng.gen_bool(0.1) {
            BigUint::from(1u32) << rng.gen_range(0..60u32)
        } else {
            natural(rng, 60)
        };
        (m.to_string(), colour::theta(&m).unwrap(), oracle::theta_naive(&m, &table))
    })
}

pub fn nu(seed: u64, count: usize) -> Result<(), String> {
    let table = PhiOracle::new(400);
    first_mismatch(seed, count, |rng| {
        let x = rational(rng);
        (x.to_string(), colour::nu(&x).unwrap(), oracle::nu_naive(&big(&x), &table))
    })
}

pub fn mu(seed: u64, count: usize) -> Result<(), String> {
    let table = PhiOracle::new(400);
    let primes = Arc::new(PrimeTable::new(64));
    let naive_primes = oracle::first_primes(64);
    first_mismatch(seed, count, |rng| {
        let x = if rng.gen_bool(0.7) { fraction(rng) } else { rational(rng) };
        (
            x.to_string(),
            colour::mu(&x, &primes).unwrap(),
            oracle::mu_naive(&big(&x), &naive_primes, &table),
        )
    })
}

pub fn alpha(seed: u64, count: usize) -> Result<(), String> {
    let table = PhiOracle::new(400);
    let primes = Arc::new(PrimeTable::new(64));
    let naive_primes = oracle::first_primes(64);
    first_mismatch(seed, count, |rng| {
        let x = rational(rng);
        (
            x.to_string(),
            colour::alpha(&x, &primes).unwrap(),
            oracle::alpha_naive(&big(&x), &naive_primes, &table),
        )
    })
}
