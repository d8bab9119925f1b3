//! Digit positions: binary start/end/gap of naturals, primorial-base
//! expansions of rationals, and the exponent functions `b`, `c`, `epsilon`
//! and the ratio `r`.
//!
//! Positions are signed: position `i` carries weight `base^i`, so the units
//! digit sits at 0 and the first digit after the radix point at -1.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{a_exponent, checked_exponent, is_power_of_two, Exponent, Rational};
use crate::primes::PrimeTable;

/// Binary digit data of a natural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryProfile {
    /// Position of the rightmost 1.
    pub end: Exponent,
    /// Position of the leftmost 1.
    pub start: Exponent,
    /// Distance between the two most significant 1s; `None` for powers of two.
    pub gap: Option<Exponent>,
    /// The bit at position `end + 1`.
    pub next_digit: u8,
    pub power_of_two: bool,
}

pub fn binary_profile(m: &BigUint) -> Result<BinaryProfile> {
    if m.is_zero() {
        return Err(Error::domain("binary profile of 0"));
    }
    let end = checked_exponent(m.trailing_zeros().unwrap_or(0) as i128)?;
    let start = checked_exponent(m.bits() as i128 - 1)?;
    let power_of_two = end == start;
    let gap = if power_of_two {
        None
    } else {
        let mut rest = m.clone();
        rest.set_bit(start as u64, false);
        Some(start - (rest.bits() as i64 - 1))
    };
    let next_digit = m.bit(end as u64 + 1) as u8;
    Ok(BinaryProfile { end, start, gap, next_digit, power_of_two })
}

pub fn binary_profile_u64(m: u64) -> Result<BinaryProfile> {
    binary_profile(&BigUint::from(m))
}

/// `e2`: position of the rightmost binary 1.
pub fn end2(m: &BigUint) -> Result<Exponent> {
    Ok(binary_profile(m)?.end)
}

/// `s2`: position of the leftmost binary 1.
pub fn start2(m: &BigUint) -> Result<Exponent> {
    Ok(binary_profile(m)?.start)
}

fn require_not_pow2(x: &Rational, what: &str) -> Result<()> {
    if is_power_of_two(x) {
        Err(Error::domain(format!("{what} is undefined on the power of two {x}")))
    } else {
        Ok(())
    }
}

fn self_check(ok: bool, what: &str, x: &Rational, v: Exponent) -> Result<Exponent> {
    if ok {
        Ok(v)
    } else {
        Err(Error::internal(format!("{what}({x}) = {v} fails its defining inequality")))
    }
}

/// `b(x) = a(x - 2^a(x))`: `2^a + 2^b <= x < 2^a + 2^(b+1)`.
pub fn b_exponent(x: &Rational) -> Result<Exponent> {
    require_not_pow2(x, "b")?;
    let a = a_exponent(x)?;
    let rest = x
        .checked_sub(&Rational::pow2(a))
        .ok_or_else(|| Error::internal(format!("{x} below 2^a")))?;
    let b = a_exponent(&rest)?;
    let ok = rest.cmp_pow2(b) != Ordering::Less && rest.cmp_pow2(b + 1) == Ordering::Less && b < a;
    self_check(ok, "b", x, b)
}

/// `c(x)`: `2^(a+1) - 2^(c+1) <= x < 2^(a+1) - 2^c`.
pub fn c_exponent(x: &Rational) -> Result<Exponent> {
    require_not_pow2(x, "c")?;
    let a = a_exponent(x)?;
    // y = 2^(a+1) - x lies in (2^c, 2^(c+1)]
    let y = Rational::pow2(a + 1)
        .checked_sub(x)
        .ok_or_else(|| Error::internal(format!("{x} not below 2^(a+1)")))?;
    let ay = a_exponent(&y)?;
    let c = if is_power_of_two(&y) { ay - 1 } else { ay };
    let ok = y.cmp_pow2(c) == Ordering::Greater && y.cmp_pow2(c + 1) != Ordering::Greater && c < a;
    self_check(ok, "c", x, c)
}

/// `epsilon(f)` for `0 < f < 1`: `1 - 2^eps <= f < 1 - 2^(eps-1)`.
pub fn epsilon_exponent(f: &Rational) -> Result<Exponent> {
    let y = Rational::one()
        .checked_sub(f)
        .ok_or_else(|| Error::domain(format!("epsilon needs 0 < f < 1, got {f}")))?;
    // 2^(eps-1) < y <= 2^eps
    let ay = a_exponent(&y)?;
    let eps = if is_power_of_two(&y) { ay } else { ay + 1 };
    let ok = y.cmp_pow2(eps - 1) == Ordering::Greater && y.cmp_pow2(eps) != Ordering::Greater;
    self_check(ok, "epsilon", f, eps)
}

/// `r(x) = (x - 2^a(x)) / 2^a(x)`, strictly inside `(0, 1)`.
pub fn r_ratio(x: &Rational) -> Result<Rational> {
    require_not_pow2(x, "r")?;
    let a = a_exponent(x)?;
    let rest = x
        .checked_sub(&Rational::pow2(a))
        .ok_or_else(|| Error::internal(format!("{x} below 2^a")))?;
    Ok(rest.mul_pow2(-a))
}

/// Sparse base-`P_n` expansion: nonzero digits keyed by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    pub base_index: usize,
    pub base: BigUint,
    pub digits: BTreeMap<Exponent, BigUint>,
}

impl DigitExpansion {
    /// Leading (leftmost) nonzero position.
    pub fn leading(&self) -> Exponent {
        *self.digits.keys().next_back().expect("expansion of a positive value")
    }

    /// Trailing (rightmost) nonzero position.
    pub fn trailing(&self) -> Exponent {
        *self.digits.keys().next().expect("expansion of a positive value")
    }

    /// Sum of `digit * base^pos`.
    pub fn evaluate(&self) -> Rational {
        let low = self.trailing().min(0);
        let mut num = BigUint::zero();
        for (&pos, d) in &self.digits {
            num += d * self.base.pow((pos - low) as u32);
        }
        let den = self.base.pow((-low) as u32);
        Rational::new(num, den).expect("nonzero expansion")
    }

    /// Digits as JSON-friendly `(pos, digit)` pairs in ascending position.
    pub fn to_json(&self) -> serde_json::Value {
        let digits: Vec<serde_json::Value> = self
            .digits
            .iter()
            .map(|(&pos, d)| match u64::try_from(d) {
                Ok(v) => serde_json::json!({ "pos": pos, "digit": v }),
                Err(_) => serde_json::json!({ "pos": pos, "digit": d.to_string() }),
            })
            .collect();
        serde_json::json!({ "base_index": self.base_index, "digits": digits })
    }

    /// Positional string with a radix point, most significant digit first.
    ///
    /// Bases up to 36 use `0-9a-z`; larger bases write each digit in decimal
    /// inside brackets.
    pub fn positional(&self) -> String {
        let hi = self.leading().max(0);
        let lo = self.trailing().min(0);
        let small = self.base <= BigUint::from(36u32);
        let zero = BigUint::zero();
        let mut out = String::new();
        for pos in (lo..=hi).rev() {
            if pos == -1 {
                out.push('.');
            }
            let d = self.digits.get(&pos).unwrap_or(&zero);
            if small {
                let v = d.iter_u32_digits().next().unwrap_or(0);
                out.push(char::from_digit(v, 36).expect("digit below 36"));
            } else {
                out.push_str(&format!("[{d}]"));
            }
        }
        out
    }
}

/// Smallest `u >= 0` with `den | P_n^u`, or an error when `den` has a prime
/// beyond `p_n`.
fn primorial_exponent_of(den: &BigUint, n: usize, table: &PrimeTable, x: &Rational) -> Result<u32> {
    let mut rest = den.clone();
    let mut u = 0u32;
    for &p in &table.primes()[..n.min(table.len())] {
        let p = BigUint::from(p);
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        u = u.max(k);
    }
    if rest.is_one() {
        Ok(u)
    } else {
        Err(Error::UnsupportedBase { value: x.to_string(), base_index: n })
    }
}

/// Expand `x` in base `P_n`.
pub fn expand(x: &Rational, n: usize, table: &PrimeTable) -> Result<DigitExpansion> {
    let base = table.primorial(n)?.clone();
    let u = primorial_exponent_of(x.denom(), n, table, x)?;
    // x * P^u is a natural number
    let scaled = x.numer() * (base.pow(u) / x.denom());
    let mut digits = BTreeMap::new();
    let mut rest = scaled;
    let mut pos = -(u as i128);
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        if !r.is_zero() {
            digits.insert(checked_exponent(pos)?, r);
        }
        rest = q;
        pos += 1;
    }
    Ok(DigitExpansion { base_index: n, base, digits })
}

/// The unique `l` with `base^l <= x < base^(l+1)`.
pub fn leading_position(x: &Rational, base: &BigUint) -> Result<Exponent> {
    // estimate through bit lengths, then correct exactly
    let lb = base.bits() as f64 - 1.0 + 0.5;
    let lx = x.numer().bits() as f64 - x.denom().bits() as f64;
    let mut l = checked_exponent((lx / lb).floor() as i128)?;
    let ge = |l: Exponent| -> bool {
        if l >= 0 {
            x.numer() >= &(x.denom() * base.pow(l as u32))
        } else {
            &(x.numer() * base.pow((-l) as u32)) >= x.denom()
        }
    };
    while !ge(l) {
        l -= 1;
    }
    while ge(l + 1) {
        l += 1;
    }
    Ok(l)
}

fn require_unit_interval(x: &Rational) -> Result<()> {
    if x.cmp(&Rational::one()) != Ordering::Less {
        Err(Error::domain(format!("expected 0 < x < 1, got {x}")))
    } else {
        Ok(())
    }
}

/// `s_n(x)` for `0 < x < 1` terminating in base `P_n`.
pub fn s_frac(x: &Rational, n: usize, table: &PrimeTable) -> Result<Exponent> {
    require_unit_interval(x)?;
    primorial_exponent_of(x.denom(), n, table, x)?;
    leading_position(x, table.primorial(n)?)
}

/// `e_n(x) = -u` with `u` the least positive integer making `x * P_n^u` whole.
pub fn e_frac(x: &Rational, n: usize, table: &PrimeTable) -> Result<Exponent> {
    require_unit_interval(x)?;
    table.primorial(n)?;
    let u = primorial_exponent_of(x.denom(), n, table, x)?;
    Ok(-(u as Exponent))
}

/// `P_n`-adic valuation of a natural number.
pub fn e_int(m: &BigUint, n: usize, table: &PrimeTable) -> Result<Exponent> {
    if m.is_zero() {
        return Err(Error::domain("valuation of 0"));
    }
    let base = table.primorial(n)?;
    let mut rest = m.clone();
    let mut k = 0;
    loop {
        let (q, r) = rest.div_rem(base);
        if !r.is_zero() {
            break;
        }
        rest = q;
        k += 1;
    }
    Ok(k)
}

/// `g(a, b)`: 0 when `e2(b) > s2(a)` (right-to-left disjoint), else 1.
pub fn right_left_disjoint(a: &BigUint, b: &BigUint) -> Result<u8> {
    Ok(if end2(b)? > start2(a)? { 0 } else { 1 })
}
