//! Slow reference implementations: binary strings, loops over exponents,
//! long division and direct set membership. Nothing here calls the library's
//! digit or colouring code.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use monochrome::colour::{AlphaPrime, AlphaValue, MuValue, NuClass, NuValue, PhiValue, ThetaValue};
use monochrome::Rational;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn big(x: &Rational) -> BigRational {
    BigRational::new(BigInt::from(x.numer().clone()), BigInt::from(x.denom().clone()))
}

pub fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `a` with `2^a <= x < 2^(a+1)`, by stepping.
pub fn a_naive(x: &BigRational) -> i64 {
    let mut a = 0;
    while &pow2(a) > x {
        a -= 1;
    }
    while &pow2(a + 1) <= x {
        a += 1;
    }
    a
}

pub fn is_pow2_naive(x: &BigRational) -> bool {
    x.is_positive() && pow2(a_naive(x)) == *x
}

pub fn in_c3_naive(x: &BigRational) -> bool {
    let rest = x - pow2(a_naive(x));
    rest.is_positive() && is_pow2_naive(&rest)
}

pub fn in_c4_naive(x: &BigRational) -> bool {
    is_pow2_naive(&(pow2(a_naive(x) + 1) - x))
}

/// `l` with `2^a + 2^l <= x < 2^a + 2^(l+1)`.
pub fn b_naive(x: &BigRational) -> i64 {
    let a = a_naive(x);
    let mut l = a - 1;
    loop {
        if pow2(a) + pow2(l) <= *x && *x < pow2(a) + pow2(l + 1) {
            return l;
        }
        l -= 1;
    }
}

/// `l` with `2^(a+1) - 2^(l+1) <= x < 2^(a+1) - 2^l`.
pub fn c_naive(x: &BigRational) -> i64 {
    let a = a_naive(x);
    let mut l = a;
    loop {
        if pow2(a + 1) - pow2(l + 1) <= *x && *x < pow2(a + 1) - pow2(l) {
            return l;
        }
        l -= 1;
    }
}

/// `eps` with `1 - 2^eps <= f < 1 - 2^(eps-1)`.
pub fn epsilon_naive(f: &BigRational) -> i64 {
    let one = BigRational::one();
    let mut e = 0;
    loop {
        if &one - pow2(e) <= *f && *f < &one - pow2(e - 1) {
            return e;
        }
        e -= 1;
    }
}

/// The two-colouring of the integers, built by the inductive construction
/// over a symmetric window.
pub struct PhiOracle {
    values: HashMap<i64, u8>,
}

impl PhiOracle {
    pub fn new(bound: i64) -> Self {
        let mut values = HashMap::from([(0, 0), (1, 1), (2, 0), (3, 1)]);
        let (mut k, mut l) = (2i64, -1i64);
        while 2 * k <= bound || 2 * l >= -bound {
            let up = 1 - values[&(k + 1)];
            values.insert(2 * k, up);
            values.insert(2 * k + 1, up);
            let down = 1 - values[&(l + 1)];
            values.insert(2 * l, down);
            values.insert(2 * l + 1, down);
            k += 1;
            l -= 1;
        }
        PhiOracle { values }
    }

    pub fn get(&self, k: i64) -> u8 {
        *self.values.get(&k).unwrap_or_else(|| panic!("phi oracle window too small for {k}"))
    }
}

fn bits(n: &BigUint) -> Vec<u8> {
    // least significant first
    n.to_str_radix(2).bytes().rev().map(|b| b - b'0').collect()
}

pub fn end_str(n: &BigUint) -> i64 {
    bits(n).iter().position(|&b| b == 1).unwrap() as i64
}

pub fn start_str(n: &BigUint) -> i64 {
    n.to_str_radix(2).len() as i64 - 1
}

pub fn gap_str(n: &BigUint) -> Option<i64> {
    let s = n.to_str_radix(2);
    s[1..].find('1').map(|i| i as i64 + 1)
}

fn bit_at(n: &BigUint, pos: i64) -> u8 {
    bits(n).get(pos as usize).copied().unwrap_or(0)
}

pub fn big_phi_naive(a: &BigUint, b: &BigUint) -> PhiValue {
    if a.is_zero() || b.is_zero() || a >= b {
        return PhiValue::Zero;
    }
    let (ea, eb) = (end_str(a), end_str(b));
    PhiValue::Tuple([
        (ea % 2) as u8,
        (eb % 2) as u8,
        bit_at(a, ea + 1),
        bit_at(b, eb + 1),
        u8::from(eb <= start_str(a)),
    ])
}

pub fn psi_naive(a: &BigUint, b: &BigUint) -> PhiValue {
    big_phi_naive(a, &(b + 1u32))
}

pub fn psi_prime_naive(a: &BigUint, b: &BigUint) -> PhiValue {
    if a.is_one() {
        big_phi_naive(&BigUint::from(1u32), &BigUint::from(2u32))
    } else {
        big_phi_naive(&(a - 1u32), b)
    }
}

pub fn theta_naive(m: &BigUint, phi: &PhiOracle) -> ThetaValue {
    let (e, s) = (end_str(m), start_str(m));
    let gap = gap_str(m);
    let (eb, sb) = (BigUint::from(e as u64), BigUint::from(s as u64));
    ThetaValue {
        power_of_two: u8::from(gap.is_none()),
        end_parity: (e % 2) as u8,
        gap_parity: gap.map_or(0, |g| (g % 2) as u8),
        inner: big_phi_naive(&eb, &sb),
        inner_shift: big_phi_naive(&eb, &(&sb + 1u32)),
        phi_of_end: phi.get(e),
        gap_is_not_one: gap.map_or(0, |g| u8::from(g != 1)),
    }
}

fn m3(v: i64) -> u8 {
    v.rem_euclid(3) as u8
}

pub fn nu_naive(x: &BigRational, phi: &PhiOracle) -> NuValue {
    if is_pow2_naive(x) {
        return NuValue::Special(NuClass::C1);
    }
    let (c3, c4) = (in_c3_naive(x), in_c4_naive(x));
    if c3 && !c4 {
        return NuValue::Special(NuClass::C3mC4);
    }
    if c4 {
        return NuValue::Special(NuClass::C4mC1);
    }
    let a = a_naive(x);
    let sq = x * x;
    let w1 = u8::from(sq >= pow2(2 * a + 1));
    let mut l = a - 1;
    let w3 = loop {
        if pow2(a) + pow2(l) < *x && *x < pow2(a) + pow2(l + 1) {
            break m3(a - l);
        }
        l -= 1;
    };
    let mut l = a;
    let (w4, c) = loop {
        if pow2(a + 1) - pow2(l + 1) < *x && *x < pow2(a + 1) - pow2(l) {
            break (m3(a - l), l);
        }
        l -= 1;
    };
    let boundary_sq = pow2(2 * a + 2) * (BigRational::one() - pow2(c - a));
    let w5 = if sq < boundary_sq { m3(a - c) } else { m3(a - c - 1) };
    NuValue::Tuple([w1, phi.get(a), w3, w4, w5])
}

pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn first_primes(count: usize) -> Vec<u64> {
    (2..).filter(|&n| is_prime_naive(n)).take(count).collect()
}

/// Smallest `n` whose primorial clears the denominator.
pub fn minimal_base_naive(x: &BigRational, primes: &[u64]) -> usize {
    let mut d = x.denom().magnitude().clone();
    let mut best = 1;
    for (i, &p) in primes.iter().enumerate() {
        while (&d % p).is_zero() {
            d /= p;
            best = i + 1;
        }
    }
    assert!(d.is_one(), "denominator of {x} outside the oracle primes");
    best
}

fn primorial(n: usize, primes: &[u64]) -> BigUint {
    primes[..n].iter().fold(BigUint::one(), |acc, &p| acc * p)
}

/// Leading and trailing digit positions of `0 < x < 1` in base `base`, by
/// long division.
pub fn fraction_positions(x: &BigRational, base: &BigUint) -> (i64, i64) {
    let b = BigRational::from_integer(BigInt::from(base.clone()));
    let mut rest = x.clone();
    let (mut lead, mut trail) = (None, 0);
    let mut pos = 0;
    while !rest.is_zero() {
        pos -= 1;
        rest *= &b;
        let digit = rest.floor();
        if !digit.is_zero() {
            lead.get_or_insert(pos);
            trail = pos;
        }
        rest -= digit;
        assert!(pos > -100_000, "{x} does not terminate");
    }
    (lead.unwrap(), trail)
}

pub fn mu_naive(x: &BigRational, primes: &[u64], phi: &PhiOracle) -> MuValue {
    let nu = nu_naive(x, phi);
    if *x >= BigRational::one() {
        return MuValue::Whole(nu);
    }
    let n = minimal_base_naive(x, primes);
    let (s, e) = fraction_positions(x, &primorial(n, primes));
    let (ls, le) = (BigUint::from((-s) as u64), BigUint::from((-e) as u64));
    MuValue::Frac { nu, phi: big_phi_naive(&ls, &le), psi_prime: psi_prime_naive(&ls, &le) }
}

/// Position of the rightmost nonzero base-`base` digit of `m`.
fn end_in_base(m: &BigUint, base: &BigUint) -> i64 {
    let mut digits = Vec::new();
    let mut rest = m.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(base);
        digits.push(r);
        rest = q;
    }
    digits.iter().position(|d| !d.is_zero()).unwrap() as i64
}

pub fn alpha_naive(x: &BigRational, primes: &[u64], phi: &PhiOracle) -> AlphaValue {
    if x.is_integer() {
        return AlphaValue::Nat(theta_naive(x.numer().magnitude(), phi));
    }
    if x.numer().is_one() && is_pow2_naive(x) {
        return AlphaValue::NegPow2;
    }
    if *x <= int(2) {
        return AlphaValue::Small;
    }
    let r = minimal_base_naive(x, primes);
    let base = primorial(r, primes);
    let fl = x.floor().numer().magnitude().clone();
    let fl1 = &fl + 1u32;
    let frac = x - x.floor();
    let (a, b, c) = (a_naive(x), b_naive(x), c_naive(x));
    let (er, er1) = (end_in_base(&fl, &base), end_in_base(&fl1, &base));
    let ratio = (x - pow2(a)) / pow2(a);
    let bit = |cond: bool| u8::from(!cond);
    let par = |v: i64| v.rem_euclid(2) as u8;
    AlphaValue::Big(AlphaPrime([
        par(a),
        par(a_naive(&frac)),
        par(epsilon_naive(&frac)),
        par(er),
        par(end_str(&fl)),
        par(er1),
        par(end_str(&fl1)),
        m3(a_naive(&ratio)),
        u8::from(gap_str(&fl).is_some()),
        bit(a - b > er),
        bit(a - b > er1),
        bit(a - c > er),
        bit(a - c > er1),
    ]))
}

/// A reduced fraction with numerator below `2^num_bits` and denominator a
/// product of up to `max_factors` primes drawn from `primes`.
pub fn random_rational(rng: &mut ChaCha8Rng, num_bits: u32, primes: &[u64], max_factors: usize) -> Rational {
    let num: u64 = rng.gen_range(1..(1u64 << num_bits));
    let mut den = BigUint::one();
    for _ in 0..rng.gen_range(0..=max_factors) {
        den *= primes[rng.gen_range(0..primes.len())];
    }
    Rational::new(BigUint::from(num), den).unwrap()
}

pub fn to_u64(x: &BigUint) -> u64 {
    x.to_u64().unwrap()
}
