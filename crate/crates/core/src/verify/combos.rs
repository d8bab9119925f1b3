use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Which sums and products of a sequence must share a colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombinationMode {
    /// `x_n + x_m` and `x_n * x_m` for `n < m`.
    Pairwise,
    /// Sums and products over every nonempty subset of distinct terms.
    #[serde(rename = "finite")]
    FiniteFsFp,
}

impl CombinationMode {
    pub fn name(self) -> &'static str {
        match self {
            CombinationMode::Pairwise => "pairwise",
            CombinationMode::FiniteFsFp => "finite",
        }
    }

    /// Number of expressions (before value dedup) for a `k`-term sequence.
    pub fn expression_count(self, k: usize) -> usize {
        match self {
            CombinationMode::Pairwise => k * k.saturating_sub(1),
            CombinationMode::FiniteFsFp => 2 * ((1usize << k) - 1),
        }
    }
}

impl fmt::Display for CombinationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CombinationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pairwise" => Ok(CombinationMode::Pairwise),
            "finite" => Ok(CombinationMode::FiniteFsFp),
            _ => Err(Error::Parse(format!("unknown mode `{s}` (pairwise|finite)"))),
        }
    }
}

/// One expression: its tag (`s:1,2` is `x_1 + x_2`, `p:1,3` is `x_1 * x_3`,
/// indices 1-based) and exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub tag: String,
    pub value: Rational,
}

/// Index subsets in canonical order: by size, then lexicographically.
pub(crate) fn subsets(k: usize, mode: CombinationMode) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = match mode {
        CombinationMode::Pairwise => {
            if k >= 2 {
                vec![2]
            } else {
                vec![]
            }
        }
        CombinationMode::FiniteFsFp => (1..=k).collect(),
    };
    let mut out = Vec::new();
    for size in sizes {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.clone());
            // advance to the next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == k - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

fn tag(kind: char, set: &[usize]) -> String {
    let body: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{kind}:{}", body.join(","))
}

/// All sums (first) and then all products for the mode, in canonical order.
pub fn combinations(xs: &[Rational], mode: CombinationMode) -> Result<Vec<Combination>> {
    let mut seen = HashSet::new();
    for x in xs {
        if !seen.insert(x) {
            return Err(Error::domain(format!("sequence repeats the term {x}")));
        }
    }
    let sets = subsets(xs.len(), mode);
    let mut out = Vec::with_capacity(2 * sets.len());
    for set in &sets {
        let value = set[1..].iter().fold(xs[set[0]].clone(), |acc, &i| &acc + &xs[i]);
        out.push(Combination { tag: tag('s', set), value });
    }
    for set in &sets {
        let value = set[1..].iter().fold(xs[set[0]].clone(), |acc, &i| &acc * &xs[i]);
        out.push(Combination { tag: tag('p', set), value });
    }
    Ok(out)
}
