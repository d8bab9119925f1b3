//! Exact positive rationals and the dyadic predicates built on them.
//!
//! Everything here is exact. Comparisons against irrational boundaries of the
//! form `2^(k+1/2)` and `2^(a+1) * sqrt(1 - 2^(c-a))` are decided by squaring,
//! since both boundaries have rational squares and no rational lies on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Signed digit position / exponent.
pub type Exponent = i64;

/// Positions must stay strictly inside `(-2^62, 2^62)`.
pub const EXPONENT_LIMIT: i64 = 1 << 62;

pub(crate) fn checked_exponent(v: i128) -> Result<Exponent> {
    if v.unsigned_abs() < EXPONENT_LIMIT as u128 {
        Ok(v as Exponent)
    } else {
        Err(Error::Overflow(format!("exponent {v} exceeds 2^62")))
    }
}

/// Compare `lhs` with `rhs * 2^shift` exactly.
pub(crate) fn cmp_shifted(lhs: &BigUint, rhs: &BigUint, shift: i64) -> Ordering {
    // cheap bit-length screen before shifting
    let lb = lhs.bits() as i128;
    let rb = rhs.bits() as i128 + shift as i128;
    if lhs.is_zero() || rhs.is_zero() {
        return lhs.cmp(rhs);
    }
    if lb > rb {
        return Ordering::Greater;
    }
    if lb < rb {
        return Ordering::Less;
    }
    if shift >= 0 {
        lhs.cmp(&(rhs << shift as u64))
    } else {
        (lhs << shift.unsigned_abs()).cmp(rhs)
    }
}

pub(crate) fn is_pow2(n: &BigUint) -> bool {
    !n.is_zero() && n.count_ones() == 1
}

/// An exact positive rational kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<BigUint>);

impl Rational {
    pub fn new(num: BigUint, den: BigUint) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::domain(format!(
                "rational needs positive numerator and denominator, got {num}/{den}"
            )));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn from_parts(num: u64, den: u64) -> Result<Self> {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::from_parts(n, 1)
    }

    pub fn from_natural(n: BigUint) -> Result<Self> {
        Self::new(n, BigUint::one())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    /// `2^k` for any exponent.
    pub fn pow2(k: Exponent) -> Self {
        if k >= 0 {
            Rational(Ratio::from_integer(BigUint::one() << k as u64))
        } else {
            Rational(Ratio::new_raw(BigUint::one(), BigUint::one() << k.unsigned_abs()))
        }
    }

    pub(crate) fn from_ratio(r: Ratio<BigUint>) -> Option<Self> {
        if r.is_zero() {
            None
        } else {
            Some(Rational(r))
        }
    }

    pub fn as_ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `self - other` when the difference is positive.
    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        if self > other {
            Some(Rational(&self.0 - &other.0))
        } else {
            None
        }
    }

    pub fn recip(&self) -> Rational {
        Rational(self.0.recip())
    }

    pub fn div(&self, other: &Rational) -> Rational {
        Rational(&self.0 / &other.0)
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: Exponent) -> Rational {
        if k >= 0 {
            Rational(Ratio::new(self.numer() << k as u64, self.denom().clone()))
        } else {
            Rational(Ratio::new(self.numer().clone(), self.denom() << k.unsigned_abs()))
        }
    }

    /// Compare with `2^k`.
    pub fn cmp_pow2(&self, k: Exponent) -> Ordering {
        cmp_shifted(self.numer(), self.denom(), k)
    }

    /// Denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        is_pow2(self.denom())
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_positive(s: &str, whole: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("`{whole}` is not of the form p or p/q")));
    }
    let n: BigUint = s.parse().map_err(|_| Error::Parse(format!("bad integer in `{whole}`")))?;
    if n.is_zero() {
        return Err(Error::Parse(format!("`{whole}` has a zero part")));
    }
    Ok(n)
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (parse_positive(n, t)?, parse_positive(d, t)?),
            None => (parse_positive(t, t)?, BigUint::one()),
        };
        Rational::new(n, d)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduced rational from positive machine integers.
pub fn make_rational(num: u64, den: u64) -> Result<Rational> {
    Rational::from_parts(num, den)
}

/// The unique `a` with `2^a <= x < 2^(a+1)`.
pub fn a_exponent(x: &Rational) -> Result<Exponent> {
    let t = x.numer().bits() as i128 - x.denom().bits() as i128;
    let t = checked_exponent(t)?;
    Ok(if x.cmp_pow2(t) == Ordering::Less { t - 1 } else { t })
}

/// Membership in `C1 = {2^k}`.
pub fn is_power_of_two(x: &Rational) -> bool {
    (x.numer().is_one() && is_pow2(x.denom())) || (x.denom().is_one() && is_pow2(x.numer()))
}

/// Membership in `C3 = {2^k + 2^l : l < k}`.
pub fn in_c3(x: &Rational) -> bool {
    x.is_dyadic() && x.numer().count_ones() == 2
}

/// Membership in `C4 = {2^k - 2^l : l < k}`: one contiguous run of binary ones.
pub fn in_c4(x: &Rational) -> bool {
    if !x.is_dyadic() {
        return false;
    }
    let n = x.numer();
    let odd = n >> n.trailing_zeros().unwrap_or(0);
    is_pow2(&(odd + 1u32))
}

/// Compare `x` with `2^(k+1/2)` via `x^2` against `2^(2k+1)`.
pub fn cmp_pow2_half(x: &Rational, k: Exponent) -> Result<Ordering> {
    let e = checked_exponent(2 * k as i128 + 1)?;
    let ord = cmp_shifted(&(x.numer() * x.numer()), &(x.denom() * x.denom()), e);
    if ord == Ordering::Equal {
        return Err(Error::internal(format!("{x} squared equals 2^{e}")));
    }
    Ok(ord)
}

/// Compare `x` with `2^(a+1) * sqrt(1 - 2^(c-a))` via `x^2` against
/// `2^(2a+2) - 2^(a+c+2)`.
pub fn cmp_c5_boundary(x: &Rational, a: Exponent, c: Exponent) -> Result<Ordering> {
    if c >= a {
        return Err(Error::domain(format!("C5 boundary needs c < a, got a={a}, c={c}")));
    }
    let gap = checked_exponent(a as i128 - c as i128)?;
    let low = checked_exponent(a as i128 + c as i128 + 2)?;
    if gap > 1 << 20 {
        return Err(Error::Overflow(format!("a - c = {gap} too wide for a squared comparison")));
    }
    // boundary^2 = 2^low * (2^gap - 1)
    let m = (BigUint::one() << gap as u64) - 1u32;
    let ord = cmp_shifted(&(x.numer() * x.numer()), &(x.denom() * x.denom() * m), low);
    if ord == Ordering::Equal {
        return Err(Error::internal(format!("{x} lies on a C5 boundary")));
    }
    Ok(ord)
}

/// Integer and fractional parts; the fractional part is `None` for integers.
pub fn floor_frac(x: &Rational) -> (BigUint, Option<Rational>) {
    let (q, r) = x.numer().div_rem(x.denom());
    let frac = Rational::from_ratio(Ratio::new(r, x.denom().clone()));
    (q, frac)
}
