//! Colourings as named, interchangeable strategies.
//!
//! Unary colourings map a positive rational to a [`ColourValue`] and drive
//! checking, searching and construction. Pair colourings act on pairs of
//! naturals and are only exposed for direct evaluation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::colour::maps;
use crate::colour::value::{ColourValue, PhiValue};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::primes::PrimeTable;

pub trait Colouring: Send + Sync {
    fn id(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn colour(&self, x: &Rational) -> Result<ColourValue>;

    fn key(&self, x: &Rational) -> Result<String> {
        Ok(self.colour(x)?.key())
    }
}

pub trait PairColouring: Send + Sync {
    fn id(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn colour_pair(&self, a: &BigUint, b: &BigUint) -> Result<PhiValue>;
}

fn require_integer<'a>(x: &'a Rational, id: &str) -> Result<&'a BigUint> {
    if x.is_integer() {
        Ok(x.numer())
    } else {
        Err(Error::domain(format!("{id} colours integers only, got {x}")))
    }
}

pub struct PhiBit;

impl Colouring for PhiBit {
    fn id(&self) -> &'static str {
        "phi"
    }
    fn describe(&self) -> &'static str {
        "two-colouring of the integers separating k+1 from 2k and 2k+1"
    }
    fn colour(&self, x: &Rational) -> Result<ColourValue> {
        let n = require_integer(x, self.id())?;
        let k = i64::try_from(n).map_err(|_| Error::Overflow(format!("{n} exceeds the exponent range")))?;
        Ok(ColourValue::Bit(maps::phi(k)))
    }
}

pub struct Theta;

impl Colouring for Theta {
    fn id(&self) -> &'static str {
        "theta"
    }
    fn describe(&self) -> &'static str {
        "colouring of the naturals by binary end, gap and nested pair colours"
    }
    fn colour(&self, x: &Rational) -> Result<ColourValue> {
        Ok(ColourValue::Theta(maps::theta(require_integer(x, self.id())?)?))
    }
}

pub struct Nu;

impl Colouring for Nu {
    fn id(&self) -> &'static str {
        "nu"
    }
    fn describe(&self) -> &'static str {
        "colouring of the positive reals by leading binary structure"
    }
    fn colour(&self, x: &Rational) -> Result<ColourValue> {
        Ok(ColourValue::Nu(maps::nu(x)?))
    }
}

pub struct Mu {
    pub table: Arc<PrimeTable>,
}

impl Colouring for Mu {
    fn id(&self) -> &'static str {
        "mu"
    }
    fn describe(&self) -> &'static str {
        "nu refined below 1 by minimal-primorial-base start and end"
    }
    fn colour(&self, x: &Rational) -> Result<ColourValue> {
        Ok(ColourValue::Mu(maps::mu(x, &self.table)?))
    }
}

pub struct Alpha {
    pub table: Arc<PrimeTable>,
}

impl Colouring for Alpha {
    fn id(&self) -> &'static str {
        "alpha"
    }
    fn describe(&self) -> &'static str {
        "colouring of the positive rationals blocking unbounded sum-product sets"
    }
    fn colour(&self, x: &Rational) -> Result<ColourValue> {
        Ok(ColourValue::Alpha(maps::alpha(x, &self.table)?))
    }
}

/// Every input gets the same colour.
pub struct Constant;

impl Colouring for Constant {
    fn id(&self) -> &'static str {
        "const"
    }
    fn describe(&self) -> &'static str {
        "constant colouring"
    }
    fn colour(&self, _x: &Rational) -> Result<ColourValue> {
        Ok(ColourValue::Const)
    }
}

pub struct BigPhi;

impl PairColouring for BigPhi {
    fn id(&self) -> &'static str {
        "bigphi"
    }
    fn describe(&self) -> &'static str {
        "pair colouring by last binary digits and disjointness"
    }
    fn colour_pair(&self, a: &BigUint, b: &BigUint) -> Result<PhiValue> {
        Ok(maps::big_phi(a, b))
    }
}

pub struct Psi;

impl PairColouring for Psi {
    fn id(&self) -> &'static str {
        "psi"
    }
    fn describe(&self) -> &'static str {
        "Phi(a, b + 1)"
    }
    fn colour_pair(&self, a: &BigUint, b: &BigUint) -> Result<PhiValue> {
        Ok(maps::psi(a, b))
    }
}

pub struct PsiPrime;

impl PairColouring for PsiPrime {
    fn id(&self) -> &'static str {
        "psiprime"
    }
    fn describe(&self) -> &'static str {
        "Phi(a - 1, b), with Phi(1, 2) at a = 1"
    }
    fn colour_pair(&self, a: &BigUint, b: &BigUint) -> Result<PhiValue> {
        maps::psi_prime(a, b)
    }
}

/// Name-indexed set of colourings.
#[derive(Clone, Default)]
pub struct Registry {
    unary: BTreeMap<&'static str, Arc<dyn Colouring>>,
    pairs: BTreeMap<&'static str, Arc<dyn PairColouring>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All built-in colourings, with `mu` and `alpha` resolving minimal bases
    /// against `table`.
    pub fn standard(table: Arc<PrimeTable>) -> Self {
        let mut r = Registry::empty();
        r.register(Arc::new(PhiBit));
        r.register(Arc::new(Theta));
        r.register(Arc::new(Nu));
        r.register(Arc::new(Mu { table: table.clone() }));
        r.register(Arc::new(Alpha { table }));
        r.register(Arc::new(Constant));
        r.register_pair(Arc::new(BigPhi));
        r.register_pair(Arc::new(Psi));
        r.register_pair(Arc::new(PsiPrime));
        r
    }

    pub fn register(&mut self, c: Arc<dyn Colouring>) {
        self.unary.insert(c.id(), c);
    }

    pub fn register_pair(&mut self, c: Arc<dyn PairColouring>) {
        self.pairs.insert(c.id(), c);
    }

    pub fn get(&self, id: &str) -> Result<Arc<dyn Colouring>> {
        if let Some(c) = self.unary.get(id) {
            return Ok(c.clone());
        }
        if self.pairs.contains_key(id) {
            return Err(Error::domain(format!("`{id}` colours pairs of naturals, not rationals")));
        }
        Err(Error::UnknownColouring(id.to_string()))
    }

    pub fn get_pair(&self, id: &str) -> Option<Arc<dyn PairColouring>> {
        self.pairs.get(id).cloned()
    }

    pub fn is_pair(&self, id: &str) -> bool {
        self.pairs.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.unary.keys().chain(self.pairs.keys()).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry_resolves_every_id() {
        let r = Registry::standard(PrimeTable::default_shared());
        let ids: Vec<_> = r.ids().collect();
        for id in ["alpha", "const", "mu", "nu", "phi", "theta", "bigphi", "psi", "psiprime"] {
            assert!(ids.contains(&id), "{id}");
        }
        assert!(r.get("nu").is_ok());
        assert!(matches!(r.get("bigphi"), Err(Error::Domain(_))));
        assert!(matches!(r.get("omega"), Err(Error::UnknownColouring(_))));
        assert!(r.get_pair("psi").is_some());
    }

    #[test]
    fn integer_colourings_reject_fractions() {
        let r = Registry::standard(PrimeTable::default_shared());
        let half: Rational = "1/2".parse().unwrap();
        assert!(r.get("theta").unwrap().colour(&half).is_err());
        assert!(r.get("phi").unwrap().colour(&half).is_err());
        assert_eq!(r.get("phi").unwrap().key(&"6".parse().unwrap()).unwrap(), "bit:1");
        assert_eq!(r.get("nu").unwrap().key(&"11/4".parse().unwrap()).unwrap(), "nu:t:0,1,2,1,1");
    }

    #[test]
    fn user_strategies_can_be_registered() {
        struct Parity;
        impl Colouring for Parity {
            fn id(&self) -> &'static str {
                "parity"
            }
            fn describe(&self) -> &'static str {
                "numerator parity"
            }
            fn colour(&self, x: &Rational) -> Result<ColourValue> {
                Ok(ColourValue::Bit(u8::from(x.numer().bit(0))))
            }
        }
        let mut r = Registry::empty();
        r.register(Arc::new(Parity));
        assert_eq!(r.get("parity").unwrap().key(&"3".parse().unwrap()).unwrap(), "bit:1");
    }
}
