//! The colourings themselves, as plain functions.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::colour::value::{AlphaPrime, AlphaValue, MuValue, NuClass, NuValue, PhiValue, ThetaValue};
use crate::digits::{
    b_exponent, binary_profile, c_exponent, e_frac, e_int, epsilon_exponent, r_ratio, s_frac,
};
use crate::error::{Error, Result};
use crate::numeric::{
    a_exponent, cmp_c5_boundary, cmp_pow2_half, floor_frac, in_c3, in_c4, is_pow2, is_power_of_two, Exponent,
    Rational,
};
use crate::primes::PrimeTable;

fn parity(v: Exponent) -> u8 {
    v.rem_euclid(2) as u8
}

fn mod3(v: Exponent) -> u8 {
    v.rem_euclid(3) as u8
}

/// Two-colouring of the integers with `phi(k+1) != phi(2k)` and
/// `phi(k+1) != phi(2k+1)` for `k` outside `{0, 1}`.
///
/// Seeds `phi(0) = phi(2) = 0`, `phi(1) = phi(3) = 1`; every other value is
/// the complement of `phi(j + 1)` where `j = floor(k / 2)`.
pub fn phi(k: Exponent) -> u8 {
    let mut k = k;
    let mut flips = 0u8;
    loop {
        match k {
            0 | 2 => return flips & 1,
            1 | 3 => return (flips + 1) & 1,
            _ => {
                k = k.div_euclid(2) + 1;
                flips ^= 1;
            }
        }
    }
}

/// Pair colouring by last-digit data, extended by zero to degenerate pairs.
pub fn big_phi(a: &BigUint, b: &BigUint) -> PhiValue {
    if a.is_zero() || b.is_zero() || a >= b {
        return PhiValue::Zero;
    }
    let pa = binary_profile(a).expect("a > 0");
    let pb = binary_profile(b).expect("b > 0");
    let g = if pb.end > pa.start { 0 } else { 1 };
    PhiValue::Tuple([parity(pa.end), parity(pb.end), pa.next_digit, pb.next_digit, g])
}

pub fn big_phi_u64(a: u64, b: u64) -> PhiValue {
    big_phi(&BigUint::from(a), &BigUint::from(b))
}

/// `Psi(a, b) = Phi(a, b + 1)`.
pub fn psi(a: &BigUint, b: &BigUint) -> PhiValue {
    big_phi(a, &(b + 1u32))
}

/// `Psi'(1, y) = Phi(1, 2)`, `Psi'(x, y) = Phi(x - 1, y)` for `x > 1`.
pub fn psi_prime(a: &BigUint, b: &BigUint) -> Result<PhiValue> {
    if a.is_zero() {
        return Err(Error::domain("psi' needs a >= 1"));
    }
    if a.is_one() {
        Ok(big_phi_u64(1, 2))
    } else {
        Ok(big_phi(&(a - 1u32), b))
    }
}

fn exponent_natural(v: Exponent) -> Result<BigUint> {
    u64::try_from(v)
        .map(BigUint::from)
        .map_err(|_| Error::internal(format!("expected a non-negative position, got {v}")))
}

/// Colouring of the naturals.
///
/// For powers of two the gap is undefined; both gap-derived components are
/// then 0.
pub fn theta(m: &BigUint) -> Result<ThetaValue> {
    let p = binary_profile(m)?;
    let end = exponent_natural(p.end)?;
    let start = exponent_natural(p.start)?;
    let (gap_parity, gap_is_not_one) = match p.gap {
        Some(g) => (parity(g), u8::from(g != 1)),
        None => (0, 0),
    };
    Ok(ThetaValue {
        power_of_two: u8::from(p.power_of_two),
        end_parity: parity(p.end),
        gap_parity,
        inner: big_phi(&end, &start),
        inner_shift: big_phi(&end, &(start + 1u32)),
        phi_of_end: phi(p.end),
        gap_is_not_one,
    })
}

/// Which of the five countable classes holds `x`, if any. `C2` and `C5` hold
/// only irrationals, so they never match here.
pub fn nu_special_class(x: &Rational) -> Option<NuClass> {
    if is_power_of_two(x) {
        Some(NuClass::C1)
    } else if in_c3(x) && !in_c4(x) {
        Some(NuClass::C3mC4)
    } else if in_c4(x) {
        Some(NuClass::C4mC1)
    } else {
        None
    }
}

/// Colouring of the positive reals, restricted to rationals.
pub fn nu(x: &Rational) -> Result<NuValue> {
    if let Some(class) = nu_special_class(x) {
        return Ok(NuValue::Special(class));
    }
    let a = a_exponent(x)?;
    let b = b_exponent(x)?;
    let c = c_exponent(x)?;
    let w1 = match cmp_pow2_half(x, a)? {
        Ordering::Less => 0,
        _ => 1,
    };
    let w5 = match cmp_c5_boundary(x, a, c)? {
        Ordering::Less => mod3(a - c),
        _ => mod3(a - c - 1),
    };
    Ok(NuValue::Tuple([w1, phi(a), mod3(a - b), mod3(a - c), w5]))
}

/// `nu` for `x >= 1`; below 1, `nu` plus the pair colourings of the negated
/// start and end positions in the minimal primorial base.
pub fn mu(x: &Rational, table: &PrimeTable) -> Result<MuValue> {
    let nu_x = nu(x)?;
    if x >= &Rational::one() {
        return Ok(MuValue::Whole(nu_x));
    }
    let n = table.minimal_base_index(x)?;
    let s = s_frac(x, n, table)?;
    let e = e_frac(x, n, table)?;
    let (ls, le) = (exponent_natural(-s)?, exponent_natural(-e)?);
    Ok(MuValue::Frac { nu: nu_x, phi: big_phi(&ls, &le), psi_prime: psi_prime(&ls, &le)? })
}

/// The 13-tuple colouring of non-integers above 2.
pub fn alpha_prime(x: &Rational, table: &PrimeTable) -> Result<AlphaPrime> {
    if x.is_integer() || x <= &Rational::integer(2)? {
        return Err(Error::domain(format!("alpha' needs a non-integer above 2, got {x}")));
    }
    let r = table.minimal_base_index(x)?;
    let (fl, frac) = floor_frac(x);
    let frac = frac.ok_or_else(|| Error::internal("non-integer without fractional part"))?;
    let fl1 = &fl + 1u32;
    let a = a_exponent(x)?;
    let b = b_exponent(x)?;
    let c = c_exponent(x)?;
    let er_fl = e_int(&fl, r, table)?;
    let er_fl1 = e_int(&fl1, r, table)?;
    let e2 = |m: &BigUint| -> Result<Exponent> { Ok(binary_profile(m)?.end) };
    let bit = |cond: bool| u8::from(!cond);
    Ok(AlphaPrime([
        parity(a),
        parity(a_exponent(&frac)?),
        parity(epsilon_exponent(&frac)?),
        parity(er_fl),
        parity(e2(&fl)?),
        parity(er_fl1),
        parity(e2(&fl1)?),
        mod3(a_exponent(&r_ratio(x)?)?),
        u8::from(!is_pow2(&fl)),
        bit(a - b > er_fl),
        bit(a - b > er_fl1),
        bit(a - c > er_fl),
        bit(a - c > er_fl1),
    ]))
}

/// Colouring of the positive rationals by the four-way case split.
pub fn alpha(x: &Rational, table: &PrimeTable) -> Result<AlphaValue> {
    if x.is_integer() {
        return Ok(AlphaValue::Nat(theta(x.numer())?));
    }
    if x.numer().is_one() && is_pow2(x.denom()) {
        return Ok(AlphaValue::NegPow2);
    }
    if x <= &Rational::integer(2)? {
        return Ok(AlphaValue::Small);
    }
    Ok(AlphaValue::Big(alpha_prime(x, table)?))
}
