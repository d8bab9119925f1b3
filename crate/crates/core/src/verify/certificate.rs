use serde::{Deserialize, Serialize};

use crate::colour::{Colouring, Registry};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::verify::combos::{combinations, CombinationMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationEntry {
    pub tag: String,
    pub value: Rational,
    /// Colour key of `value`.
    pub colour: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Every combination has this colour key.
    Monochromatic(String),
    /// No combinations at all (a single term under pairwise mode).
    Vacuous,
    /// Indices of the first two combinations with different colours.
    Clash([usize; 2]),
}

impl Verdict {
    pub fn is_monochromatic(&self) -> bool {
        !matches!(self, Verdict::Clash(_))
    }
}

/// A sequence, its full combination set under a mode, each combination's
/// colour, and the resulting verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub colouring: String,
    pub mode: CombinationMode,
    pub sequence: Vec<Rational>,
    pub combinations: Vec<CombinationEntry>,
    pub verdict: Verdict,
}

fn verdict_of(entries: &[CombinationEntry]) -> Verdict {
    let Some(first) = entries.first() else {
        return Verdict::Vacuous;
    };
    match entries.iter().position(|e| e.colour != first.colour) {
        Some(j) => Verdict::Clash([0, j]),
        None => Verdict::Monochromatic(first.colour.clone()),
    }
}

/// Colour every combination of `xs` and decide monochromaticity.
pub fn check(colouring: &dyn Colouring, xs: &[Rational], mode: CombinationMode) -> Result<Certificate> {
    let combos = combinations(xs, mode)?;
    let mut entries = Vec::with_capacity(combos.len());
    for c in combos {
        let colour = colouring.key(&c.value).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!("{} = {}: {msg}", c.tag, c.value)),
            other => other,
        })?;
        entries.push(CombinationEntry { tag: c.tag, value: c.value, colour });
    }
    let verdict = verdict_of(&entries);
    Ok(Certificate { colouring: colouring.id().to_string(), mode, sequence: xs.to_vec(), combinations: entries, verdict })
}

/// Recompute a certificate from scratch; `Err` carries the first reason it
/// is wrong.
pub fn validate(cert: &Certificate, registry: &Registry) -> std::result::Result<(), String> {
    let colouring = registry.get(&cert.colouring).map_err(|e| e.to_string())?;
    let combos = combinations(&cert.sequence, cert.mode).map_err(|e| e.to_string())?;
    if combos.len() != cert.combinations.len() {
        return Err(format!(
            "expected {} combinations, certificate lists {}",
            combos.len(),
            cert.combinations.len()
        ));
    }
    for (i, (want, got)) in combos.iter().zip(&cert.combinations).enumerate() {
        if want.tag != got.tag || want.value != got.value {
            return Err(format!("entry {i}: expected {}={}, found {}={}", want.tag, want.value, got.tag, got.value));
        }
        let key = colouring.key(&want.value).map_err(|e| format!("entry {i}: {e}"))?;
        if key != got.colour {
            return Err(format!("entry {i}: colour of {} is {key}, certificate says {}", want.value, got.colour));
        }
    }
    let verdict = verdict_of(&cert.combinations);
    if verdict != cert.verdict {
        return Err(format!("verdict should be {verdict:?}, certificate says {:?}", cert.verdict));
    }
    Ok(())
}

pub fn is_valid(cert: &Certificate, registry: &Registry) -> bool {
    validate(cert, registry).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::PrimeTable;

    fn seq(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn registry() -> Registry {
        Registry::standard(PrimeTable::default_shared())
    }

    #[test]
    fn nu_clash_on_two_and_four() {
        let r = registry();
        let cert = check(r.get("nu").unwrap().as_ref(), &seq(&["2", "4"]), CombinationMode::Pairwise).unwrap();
        assert_eq!(cert.verdict, Verdict::Clash([0, 1]));
        assert_eq!(cert.combinations[0].colour, "nu:s:C4mC1");
        assert_eq!(cert.combinations[1].colour, "nu:s:C1");
        assert!(is_valid(&cert, &r));
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            json,
            r#"{"colouring":"nu","mode":"pairwise","sequence":["2","4"],"combinations":[{"tag":"s:1,2","value":"6","colour":"nu:s:C4mC1"},{"tag":"p:1,2","value":"8","colour":"nu:s:C1"}],"verdict":{"clash":[0,1]}}"#
        );
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn constant_is_monochromatic_and_singletons_are_vacuous() {
        let r = registry();
        let cert = check(r.get("const").unwrap().as_ref(), &seq(&["1", "2", "3"]), CombinationMode::FiniteFsFp).unwrap();
        assert_eq!(cert.verdict, Verdict::Monochromatic("const".into()));
        let cert = check(r.get("nu").unwrap().as_ref(), &seq(&["5"]), CombinationMode::Pairwise).unwrap();
        assert_eq!(cert.verdict, Verdict::Vacuous);
        assert!(cert.verdict.is_monochromatic());
        assert_eq!(serde_json::to_string(&cert.verdict).unwrap(), r#""vacuous""#);
    }

    #[test]
    fn tampering_is_detected() {
        let r = registry();
        let good = check(r.get("nu").unwrap().as_ref(), &seq(&["1/3", "1/5", "1/7"]), CombinationMode::Pairwise).unwrap();
        assert!(is_valid(&good, &r));

        let mut bad = good.clone();
        bad.combinations[2].colour = "nu:s:C1".into();
        assert!(validate(&bad, &r).unwrap_err().contains("entry 2"));

        let mut bad = good.clone();
        bad.combinations.pop();
        assert!(!is_valid(&bad, &r));

        let mut bad = good.clone();
        bad.verdict = Verdict::Monochromatic("x".into());
        assert!(!is_valid(&bad, &r) || good.verdict == bad.verdict);
    }

    #[test]
    fn domain_errors_name_the_value() {
        let r = registry();
        let err = check(r.get("theta").unwrap().as_ref(), &seq(&["1/2", "3"]), CombinationMode::Pairwise).unwrap_err();
        assert!(err.to_string().contains("s:1,2 = 7/2"), "{err}");
    }
}
