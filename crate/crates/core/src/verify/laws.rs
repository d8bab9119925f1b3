//! Seeded randomized checks of the digit identities the colourings rely on.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digits;
use crate::error::Result;
use crate::numeric::{Exponent, Rational};
use crate::primes::PrimeTable;

/// Digit primitives under test. Override a method to inject a fault.
pub trait DigitOps: Send + Sync {
    fn table(&self) -> &PrimeTable;

    fn end2(&self, m: &BigUint) -> Result<Exponent> {
        digits::end2(m)
    }

    fn start2(&self, m: &BigUint) -> Result<Exponent> {
        digits::start2(m)
    }

    fn end_primorial(&self, x: &Rational, t: usize) -> Result<Exponent> {
        digits::e_frac(x, t, self.table())
    }

    fn start_primorial(&self, x: &Rational, t: usize) -> Result<Exponent> {
        digits::s_frac(x, t, self.table())
    }
}

pub struct StandardDigits {
    pub table: Arc<PrimeTable>,
}

impl DigitOps for StandardDigits {
    fn table(&self) -> &PrimeTable {
        &self.table
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub checked: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub samples: u64,
    pub laws: Vec<LawReport>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// `None` when the sample satisfies the law, otherwise a description.
type Sample = Result<Option<String>>;

pub const LAWS: [&str; 7] = [
    "disjoint_support_sum",
    "binary_product_end",
    "binary_product_start",
    "same_end_carry",
    "primorial_product_end",
    "primorial_product_start",
    "c3_dyadic_closure",
];

fn random_natural(rng: &mut ChaCha8Rng, max_bits: u32) -> BigUint {
    let bits = rng.gen_range(1..=max_bits);
    let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
    let mut m = BigUint::from_slice(&words);
    m >>= words.len() as u32 * 32 - bits;
    m.set_bit(u64::from(bits - 1), true);
    m
}

fn violation(ok: bool, msg: impl FnOnce() -> String) -> Sample {
    Ok(if ok { None } else { Some(msg()) })
}

fn disjoint_support_sum(ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let a = random_natural(rng, 96);
    let b = random_natural(rng, 96) << (ops.start2(&a)? as u64 + 1 + rng.gen_range(0..8u64));
    let s = &a + &b;
    let (ea, sb) = (ops.end2(&a)?, ops.start2(&b)?);
    let (es, ss) = (ops.end2(&s)?, ops.start2(&s)?);
    violation(es == ea && ss == sb, || format!("a={a}, b={b}: a+b has end {es} start {ss}, expected {ea} and {sb}"))
}

fn binary_product_end(ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let a = random_natural(rng, 128);
    let b = random_natural(rng, 128);
    let (ea, eb, ep) = (ops.end2(&a)?, ops.end2(&b)?, ops.end2(&(&a * &b))?);
    violation(ep == ea + eb, || format!("a={a}, b={b}: end(ab)={ep}, end(a)+end(b)={}", ea + eb))
}

/// `m < 2^s * sqrt 2` for `s = start2(m)`.
fn below_sqrt2(m: &BigUint, start: Exponent) -> bool {
    (m * m) < (BigUint::one() << (2 * start as u64 + 1))
}

fn binary_product_start(ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let a = random_natural(rng, 128);
    let b = random_natural(rng, 128);
    let (sa, sb, sp) = (ops.start2(&a)?, ops.start2(&b)?, ops.start2(&(&a * &b))?);
    let delta = sp - sa - sb;
    let expected = match (below_sqrt2(&a, sa), below_sqrt2(&b, sb)) {
        (true, true) => Some(0),
        (false, false) => Some(1),
        _ => None,
    };
    violation((delta == 0 || delta == 1) && expected.is_none_or(|e| e == delta), || {
        format!("a={a}, b={b}: start(ab)-start(a)-start(b)={delta}")
    })
}

fn same_end_carry(ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let shift = rng.gen_range(0..80u64);
    let odd_a = (random_natural(rng, 96) << 1u32) | BigUint::one();
    let mut odd_b = (random_natural(rng, 96) << 1u32) | BigUint::one();
    odd_b.set_bit(1, odd_a.bit(1));
    let a = odd_a << shift;
    let b = odd_b << shift;
    let es = ops.end2(&(&a + &b))?;
    violation(es == shift as Exponent + 1, || format!("a={a}, b={b}: end(a+b)={es}, expected {}", shift + 1))
}

/// A fraction in `(0, 1)` whose minimal primorial base is exactly `t` and
/// whose last base-`P_t` digit is `digit` (when given).
fn primorial_fraction(table: &PrimeTable, rng: &mut ChaCha8Rng, t: usize, digit: Option<u64>) -> Result<(Rational, u64)> {
    let base = table.primorial(t)?.clone();
    let p = u64::try_from(&base).expect("small primorial");
    loop {
        let u = rng.gen_range(1..=4u32);
        let d = digit.unwrap_or_else(|| rng.gen_range(1..p));
        let head = if u == 1 { BigUint::zero() } else { random_below(rng, &base.pow(u - 1)) };
        let x = Rational::new(head * &base + d, base.pow(u))?;
        if table.minimal_base_index(&x)? == t {
            return Ok((x, d));
        }
    }
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    let bits = bound.bits() as u32;
    loop {
        let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
        let mut m = BigUint::from_slice(&words);
        m >>= words.len() as u32 * 32 - bits;
        if &m < bound {
            return m;
        }
    }
}

fn primorial_product_end(ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let t = rng.gen_range(1..=3usize);
    let (x, d) = primorial_fraction(ops.table(), rng, t, None)?;
    let (y, _) = primorial_fraction(ops.table(), rng, t, Some(d))?;
    let xy = &x * &y;
    let (ex, ey, exy) = (ops.end_primorial(&x, t)?, ops.end_primorial(&y, t)?, ops.end_primorial(&xy, t)?);
    violation(exy == ex + ey, || format!("t={t}, x={x}, y={y}: end(xy)={exy}, end(x)+end(y)={}", ex + ey))
}

/// `x >= sqrt(P_t) * P_t^s` for `s = start_t(x)`.
fn above_sqrt_base(x: &Rational, s: Exponent, base: &BigUint) -> bool {
    // x^2 * P^(-2s-1) >= 1, with s < 0
    let k = (-2 * s - 1) as u32;
    let sq = x * x;
    sq.numer() * base.pow(k) >= *sq.denom()
}

fn primorial_product_start(ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let t = rng.gen_range(1..=3usize);
    let base = ops.table().primorial(t)?.clone();
    let (x, _) = primorial_fraction(ops.table(), rng, t, None)?;
    let sx = ops.start_primorial(&x, t)?;
    let case = above_sqrt_base(&x, sx, &base);
    let (y, sy) = loop {
        let (y, _) = primorial_fraction(ops.table(), rng, t, None)?;
        let sy = ops.start_primorial(&y, t)?;
        if above_sqrt_base(&y, sy, &base) == case && y != x {
            break (y, sy);
        }
    };
    let sxy = ops.start_primorial(&(&x * &y), t)?;
    let expected = sx + sy + Exponent::from(case);
    violation(sxy == expected, || format!("t={t}, x={x}, y={y}: start(xy)={sxy}, expected {expected}"))
}

fn c3_element(rng: &mut ChaCha8Rng) -> BigRational {
    let k = rng.gen_range(-8..=8i32);
    let l = rng.gen_range(-9..k);
    let pow = |e: i32| {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as u32)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as u32)
        }
    };
    pow(k) + pow(l)
}

/// Retries until a triple gives positive distinct `x, y, z`.
fn c3_dyadic_closure(_ops: &dyn DigitOps, rng: &mut ChaCha8Rng) -> Sample {
    let two = BigRational::from_integer(BigInt::from(2));
    loop {
        let (a, b, c) = (c3_element(rng), c3_element(rng), c3_element(rng));
        let x = (&a + &b - &c) / &two;
        let y = (&a - &b + &c) / &two;
        let z = (-&a + &b + &c) / &two;
        if !(x.is_positive() && y.is_positive() && z.is_positive()) || x == y || y == z || x == z {
            continue;
        }
        let dyadic = |q: &BigRational| {
            let d = q.denom().magnitude();
            d.count_ones() == 1
        };
        return violation(dyadic(&x) && dyadic(&y) && dyadic(&z), || format!("alpha={a}, beta={b}, gamma={c}: x={x}, y={y}, z={z}"));
    }
}

fn run_law(name: &str, idx: u64, seed: u64, samples: u64, ops: &dyn DigitOps) -> LawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx);
    let law: fn(&dyn DigitOps, &mut ChaCha8Rng) -> Sample = match name {
        "disjoint_support_sum" => disjoint_support_sum,
        "binary_product_end" => binary_product_end,
        "binary_product_start" => binary_product_start,
        "same_end_carry" => same_end_carry,
        "primorial_product_end" => primorial_product_end,
        "primorial_product_start" => primorial_product_start,
        _ => c3_dyadic_closure,
    };
    let mut checked = 0;
    for _ in 0..samples {
        checked += 1;
        let failure = match law(ops, &mut rng) {
            Ok(None) => continue,
            Ok(Some(msg)) => msg,
            Err(e) => format!("error: {e}"),
        };
        return LawReport { law: name.to_string(), checked, passed: false, counterexample: Some(failure) };
    }
    LawReport { law: name.to_string(), checked, passed: true, counterexample: None }
}

/// Check every law on `samples` seeded random instances; each law stops at
/// its first counterexample.
pub fn property_suite(seed: u64, samples: u64, ops: &dyn DigitOps) -> PropertyReport {
    let laws = LAWS.iter().enumerate().map(|(i, name)| run_law(name, i as u64, seed, samples, ops)).collect();
    PropertyReport { seed, samples, laws }
}
