//! Structured colour values and their canonical key strings.
//!
//! Key grammar (no whitespace):
//!
//! ```text
//! bit     := "bit:" D
//! phi     := "phi:z" | "phi:t:" D "," D "," D "," D "," D
//! theta   := "theta:" D "," D "," D "|" phi "|" phi "|" D "," D
//! nu      := "nu:s:" ("C1" | "C2" | "C3mC4" | "C4mC1" | "C5mC2")
//!          | "nu:t:" D "," D "," D "," D "," D
//! mu      := "mu:w:" nu | "mu:f:" nu "|" phi "|" phi
//! alpha   := "alpha:n:" theta | "alpha:np2" | "alpha:small"
//!          | "alpha:b:" D ("," D){12}
//! const   := "const"
//! ```
//!
//! `D` is a single decimal digit. Residues are always canonical and
//! non-negative.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A colour of a pair under the digit-pattern colouring, or the zero colour
/// given to degenerate pairs (`a = 0`, `b = 0` or `a >= b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiValue {
    Zero,
    /// `(e2(a) mod 2, e2(b) mod 2, d(a), d(b), g(a, b))`
    Tuple([u8; 5]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaValue {
    pub power_of_two: u8,
    pub end_parity: u8,
    pub gap_parity: u8,
    pub inner: PhiValue,
    pub inner_shift: PhiValue,
    pub phi_of_end: u8,
    pub gap_is_not_one: u8,
}

/// The five countable classes of the real colouring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NuClass {
    C1,
    C2,
    C3mC4,
    C4mC1,
    C5mC2,
}

impl NuClass {
    pub const ALL: [NuClass; 5] = [NuClass::C1, NuClass::C2, NuClass::C3mC4, NuClass::C4mC1, NuClass::C5mC2];

    pub fn name(self) -> &'static str {
        match self {
            NuClass::C1 => "C1",
            NuClass::C2 => "C2",
            NuClass::C3mC4 => "C3mC4",
            NuClass::C4mC1 => "C4mC1",
            NuClass::C5mC2 => "C5mC2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NuValue {
    Special(NuClass),
    /// `(w1, w2, w3, w4, w5)` with `w1, w2` in `{0,1}` and the rest in `{0,1,2}`.
    Tuple([u8; 5]),
}

impl NuValue {
    pub fn is_open_class(&self) -> bool {
        matches!(self, NuValue::Tuple(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MuValue {
    Whole(NuValue),
    Frac { nu: NuValue, phi: PhiValue, psi_prime: PhiValue },
}

/// The 13 components used above 2 for non-integers: seven parities, one
/// residue mod 3, then the bits `p, q, q', s, s'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlphaPrime(pub [u8; 13]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaValue {
    Nat(ThetaValue),
    NegPow2,
    Small,
    Big(AlphaPrime),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColourValue {
    Bit(u8),
    Phi(PhiValue),
    Theta(ThetaValue),
    Nu(NuValue),
    Mu(MuValue),
    Alpha(AlphaValue),
    Const,
}

impl ColourValue {
    /// Canonical key; equal keys mean equal colours.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

fn join(ds: &[u8]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for PhiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiValue::Zero => f.write_str("phi:z"),
            PhiValue::Tuple(t) => write!(f, "phi:t:{}", join(t)),
        }
    }
}

impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theta:{},{},{}|{}|{}|{},{}",
            self.power_of_two,
            self.end_parity,
            self.gap_parity,
            self.inner,
            self.inner_shift,
            self.phi_of_end,
            self.gap_is_not_one
        )
    }
}

impl fmt::Display for NuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuValue::Special(c) => write!(f, "nu:s:{}", c.name()),
            NuValue::Tuple(t) => write!(f, "nu:t:{}", join(t)),
        }
    }
}

impl fmt::Display for MuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuValue::Whole(nu) => write!(f, "mu:w:{nu}"),
            MuValue::Frac { nu, phi, psi_prime } => write!(f, "mu:f:{nu}|{phi}|{psi_prime}"),
        }
    }
}

impl fmt::Display for AlphaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaValue::Nat(t) => write!(f, "alpha:n:{t}"),
            AlphaValue::NegPow2 => f.write_str("alpha:np2"),
            AlphaValue::Small => f.write_str("alpha:small"),
            AlphaValue::Big(AlphaPrime(t)) => write!(f, "alpha:b:{}", join(t)),
        }
    }
}

impl fmt::Display for ColourValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColourValue::Bit(b) => write!(f, "bit:{b}"),
            ColourValue::Phi(v) => v.fmt(f),
            ColourValue::Theta(v) => v.fmt(f),
            ColourValue::Nu(v) => v.fmt(f),
            ColourValue::Mu(v) => v.fmt(f),
            ColourValue::Alpha(v) => v.fmt(f),
            ColourValue::Const => f.write_str("const"),
        }
    }
}

fn bad(key: &str) -> Error {
    Error::Parse(format!("malformed colour key `{key}`"))
}

fn digits<const N: usize>(s: &str, modulus: &[u8; N], key: &str) -> Result<[u8; N]> {
    let mut out = [0u8; N];
    let mut parts = s.split(',');
    for (slot, &m) in out.iter_mut().zip(modulus) {
        let p = parts.next().ok_or_else(|| bad(key))?;
        let v: u8 = p.parse().map_err(|_| bad(key))?;
        if p.len() != 1 || v >= m {
            return Err(bad(key));
        }
        *slot = v;
    }
    if parts.next().is_some() {
        return Err(bad(key));
    }
    Ok(out)
}

const PHI_MOD: [u8; 5] = [2; 5];
const NU_MOD: [u8; 5] = [2, 2, 3, 3, 3];
const ALPHA_MOD: [u8; 13] = [2, 2, 2, 2, 2, 2, 2, 3, 2, 2, 2, 2, 2];

fn parse_phi(s: &str) -> Result<PhiValue> {
    if s == "phi:z" {
        return Ok(PhiValue::Zero);
    }
    let rest = s.strip_prefix("phi:t:").ok_or_else(|| bad(s))?;
    Ok(PhiValue::Tuple(digits(rest, &PHI_MOD, s)?))
}

fn parse_theta(s: &str) -> Result<ThetaValue> {
    let rest = s.strip_prefix("theta:").ok_or_else(|| bad(s))?;
    let parts: Vec<&str> = rest.split('|').collect();
    let [head, inner, shift, tail] = parts[..] else {
        return Err(bad(s));
    };
    let [p, e, g] = digits(head, &[2, 2, 2], s)?;
    let [f, t] = digits(tail, &[2, 2], s)?;
    Ok(ThetaValue {
        power_of_two: p,
        end_parity: e,
        gap_parity: g,
        inner: parse_phi(inner)?,
        inner_shift: parse_phi(shift)?,
        phi_of_end: f,
        gap_is_not_one: t,
    })
}

fn parse_nu(s: &str) -> Result<NuValue> {
    if let Some(name) = s.strip_prefix("nu:s:") {
        return NuClass::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .map(NuValue::Special)
            .ok_or_else(|| bad(s));
    }
    let rest = s.strip_prefix("nu:t:").ok_or_else(|| bad(s))?;
    Ok(NuValue::Tuple(digits(rest, &NU_MOD, s)?))
}

fn parse_mu(s: &str) -> Result<MuValue> {
    if let Some(rest) = s.strip_prefix("mu:w:") {
        return Ok(MuValue::Whole(parse_nu(rest)?));
    }
    let rest = s.strip_prefix("mu:f:").ok_or_else(|| bad(s))?;
    let parts: Vec<&str> = rest.split('|').collect();
    let [nu, phi, psi] = parts[..] else {
        return Err(bad(s));
    };
    Ok(MuValue::Frac { nu: parse_nu(nu)?, phi: parse_phi(phi)?, psi_prime: parse_phi(psi)? })
}

fn parse_alpha(s: &str) -> Result<AlphaValue> {
    match s {
        "alpha:np2" => return Ok(AlphaValue::NegPow2),
        "alpha:small" => return Ok(AlphaValue::Small),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("alpha:n:") {
        return Ok(AlphaValue::Nat(parse_theta(rest)?));
    }
    let rest = s.strip_prefix("alpha:b:").ok_or_else(|| bad(s))?;
    Ok(AlphaValue::Big(AlphaPrime(digits(rest, &ALPHA_MOD, s)?)))
}

impl FromStr for ColourValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let head = s.split(':').next().unwrap_or_default();
        Ok(match head {
            "bit" => match s {
                "bit:0" => ColourValue::Bit(0),
                "bit:1" => ColourValue::Bit(1),
                _ => return Err(bad(s)),
            },
            "phi" => ColourValue::Phi(parse_phi(s)?),
            "theta" => ColourValue::Theta(parse_theta(s)?),
            "nu" => ColourValue::Nu(parse_nu(s)?),
            "mu" => ColourValue::Mu(parse_mu(s)?),
            "alpha" => ColourValue::Alpha(parse_alpha(s)?),
            "const" if s == "const" => ColourValue::Const,
            _ => return Err(bad(s)),
        })
    }
}

impl Serialize for ColourValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColourValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
