//! Finite sequences in `(0, 1)` whose finite sums and products share one
//! `mu` colour.
//!
//! The base sequence is `1/p_r` over the indices from
//! [`reciprocal_prime_indices`]. Terms are products over consecutive blocks
//! of base positions, found by backtracking: every new term must keep all
//! finite products in the `nu` class of the first term, and (for the
//! sum-closed variant) stay below the openness radius of every current subset
//! sum, so all sums stay in that class too.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colour::registry::Mu;
use crate::colour::{nu, nu_special_class, NuValue};
use crate::digits::{b_exponent, c_exponent, e_frac, s_frac};
use crate::error::{Error, Result};
use crate::numeric::{a_exponent, cmp_c5_boundary, cmp_pow2_half, Exponent, Rational};
use crate::primes::PrimeTable;
use crate::verify::{check, Certificate, CombinationMode, Verdict};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_BASE_TERMS: usize = 18;
pub const DEFAULT_MAX_BLOCK: usize = 4;

/// Reciprocal-prime base sequence and the blocks of it forming each term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    /// Prime indices `r_1 < r_2 < ...` (1-based, `p_1 = 2`).
    pub prime_indices: Vec<usize>,
    pub primes: Vec<u64>,
    /// 1-based positions into the base sequence.
    pub blocks: Vec<Vec<usize>>,
    pub terms: Vec<Rational>,
}

impl BlockSystem {
    fn new(table: &PrimeTable, prime_indices: Vec<usize>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let primes = prime_indices.iter().map(|&r| table.nth_prime(r)).collect::<Result<Vec<_>>>()?;
        let terms = blocks.iter().map(|b| block_value(&primes, b)).collect();
        Ok(BlockSystem { prime_indices, primes, blocks, terms })
    }

    /// Blocks nonempty, increasing and disjoint; terms in `(0, 1)`, strictly
    /// decreasing and equal to their block products.
    pub fn check_shape(&self) -> Result<()> {
        let mut last = 0;
        for (i, block) in self.blocks.iter().enumerate() {
            if block.is_empty() || block[0] <= last || block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::internal(format!("block {} is not after block {i}", i + 1)));
            }
            if block.last().is_some_and(|&p| p > self.primes.len()) {
                return Err(Error::internal(format!("block {} leaves the base sequence", i + 1)));
            }
            last = *block.last().unwrap_or(&last);
            if block_value(&self.primes, block) != self.terms[i] {
                return Err(Error::internal(format!("term {} does not match its block", i + 1)));
            }
        }
        if self.terms.windows(2).any(|w| w[0] <= w[1]) || self.terms.first().is_some_and(|y| y >= &Rational::one()) {
            return Err(Error::internal("terms are not strictly decreasing inside (0, 1)"));
        }
        Ok(())
    }
}

fn block_value(primes: &[u64], block: &[usize]) -> Rational {
    let den = block.iter().fold(BigUint::one(), |acc, &t| acc * primes[t - 1]);
    Rational::new(BigUint::one(), den).expect("nonzero block product")
}

/// The first `count` base indices: `r_1 = 2`, then each next index is the
/// smallest whose reciprocal is below half of the slack left under 1/2.
pub fn reciprocal_prime_indices(count: usize, table: &PrimeTable) -> Result<Vec<usize>> {
    if count == 0 {
        return Err(Error::domain("need at least one reciprocal prime"));
    }
    let half = Rational::from_parts(1, 2)?;
    let mut slack = half.checked_sub(&Rational::from_parts(1, table.nth_prime(2)?)?).expect("1/3 < 1/2");
    let mut out = vec![2];
    let mut idx = 2;
    while out.len() < count {
        idx += 1;
        let p = table.nth_prime(idx)?;
        let term = Rational::from_parts(1, p)?;
        // 1/p < slack/2
        if term.mul_pow2(1) < slack {
            slack = slack.checked_sub(&term).expect("term below slack");
            out.push(idx);
        }
    }
    Ok(out)
}

/// A right neighbourhood `(center, center + radius)` inside one `nu` class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpennessRadius {
    pub center: Rational,
    pub radius: Rational,
    pub colour: String,
}

/// A rational `r` with `x < r <= sqrt(q)`; needs `x^2 < q`.
fn sqrt_below(x: &Rational, q: &Rational) -> Rational {
    let mut precision: u64 = 16 + x.denom().bits() + q.denom().bits();
    loop {
        let scaled = (q.numer() << (2 * precision)) / q.denom();
        let r = Rational::new(scaled.sqrt(), BigUint::one()).map(|r| r.mul_pow2(-(precision as Exponent)));
        if let Ok(r) = r {
            if &r > x {
                return r;
            }
        }
        precision *= 2;
    }
}

/// Distance from `x` to the nearest right endpoint of the `A`, `H`, `J` and
/// `B` cells holding it, with irrational endpoints rounded down.
pub fn openness_radius(x: &Rational) -> Result<OpennessRadius> {
    if let Some(class) = nu_special_class(x) {
        return Err(Error::domain(format!("{x} lies in the countable class {class:?}: no open neighbourhood")));
    }
    let colour = nu(x)?.to_string();
    let a = a_exponent(x)?;
    let b = b_exponent(x)?;
    let c = c_exponent(x)?;
    let h_end = &Rational::pow2(a) + &Rational::pow2(b + 1);
    let j_end = Rational::pow2(a + 1).checked_sub(&Rational::pow2(c)).expect("c < a + 1");
    let a_end = match cmp_pow2_half(x, a)? {
        Ordering::Less => sqrt_below(x, &Rational::pow2(2 * a + 1)),
        _ => Rational::pow2(a + 1),
    };
    let b_end = match cmp_c5_boundary(x, a, c)? {
        Ordering::Less => {
            let q = Rational::pow2(2 * a + 2).checked_sub(&Rational::pow2(a + c + 2)).expect("c < a");
            sqrt_below(x, &q)
        }
        _ => j_end.clone(),
    };
    let end = [h_end, j_end, a_end, b_end].into_iter().min().expect("four candidates");
    let radius = end.checked_sub(x).ok_or_else(|| Error::internal(format!("cell end {end} not above {x}")))?;
    Ok(OpennessRadius { center: x.clone(), radius, colour })
}

/// `s_k(z) = e_k(z) = -1` in the minimal primorial base `P_k` of `z`.
pub fn minimal_digit_fact(z: &Rational, table: &PrimeTable) -> Result<bool> {
    if z >= &Rational::one() {
        return Err(Error::domain(format!("expected 0 < z < 1, got {z}")));
    }
    let k = table.minimal_base_index(z)?;
    Ok(s_frac(z, k, table)? == -1 && e_frac(z, k, table)? == -1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructConfig {
    /// Candidate blocks examined before giving up.
    pub budget: u64,
    /// Length of the reciprocal-prime base sequence.
    pub base_terms: usize,
    /// Largest block size tried.
    pub max_block: usize,
    /// Worker threads; 0 means rayon's default.
    pub workers: usize,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            budget: DEFAULT_BUDGET,
            base_terms: DEFAULT_BASE_TERMS,
            max_block: DEFAULT_MAX_BLOCK,
            workers: 0,
        }
    }
}

/// A block system whose finite products share the `nu` colour `colour`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSubsystem {
    pub system: BlockSystem,
    pub colour: String,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub system: BlockSystem,
    pub terms: Vec<Rational>,
    pub colour: String,
    /// Size of the prime table the certificate's `mu` colours were taken in.
    pub prime_table: usize,
    pub nodes: u64,
    pub certificate: Certificate,
}

/// Prime table large enough for the base sequence of `base_terms` terms.
pub fn table_for(base_terms: usize) -> Result<Arc<PrimeTable>> {
    let mut size = 1024;
    loop {
        let table = PrimeTable::new(size);
        match reciprocal_prime_indices(base_terms, &table) {
            Ok(r) => {
                let needed = *r.last().expect("nonempty");
                return Ok(Arc::new(if needed == size { table } else { PrimeTable::new(needed) }));
            }
            Err(Error::PrimeIndex { .. }) if size < 1 << 24 => size *= 4,
            Err(e) => return Err(e),
        }
    }
}

/// Blocks of `start..n` (0-based) by size, then lexicographically.
fn blocks_from(start: usize, n: usize, max_block: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max_block.min(n.saturating_sub(start)) {
        let mut idx: Vec<usize> = (start..start + size).collect();
        loop {
            out.push(idx.clone());
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
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

struct Walk<'a> {
    base: &'a [Rational],
    m: usize,
    max_block: usize,
    sum_closed: bool,
    cap: u64,
    index: usize,
    cutoff: &'a AtomicUsize,
    nodes: u64,
    best: usize,
    found: Option<Vec<Vec<usize>>>,
    stopped: bool,
}

#[derive(Clone)]
struct State {
    blocks: Vec<Vec<usize>>,
    ys: Vec<Rational>,
    prods: Vec<Rational>,
    sums: Vec<Rational>,
    class: NuValue,
    /// Strict upper bound for the next term.
    bound: Rational,
}

impl Walk<'_> {
    fn value(&self, block: &[usize]) -> Rational {
        block[1..].iter().fold(self.base[block[0]].clone(), |acc, &t| &acc * &self.base[t])
    }

    fn tick(&mut self) -> bool {
        if self.cutoff.load(AtomicOrdering::Relaxed) < self.index || self.nodes >= self.cap {
            self.stopped = true;
            return false;
        }
        self.nodes += 1;
        true
    }

    /// Try `block` as the next term; the extended state when every new
    /// product (and sum) stays in the class.
    fn extend(&self, state: &State, block: Vec<usize>) -> Result<Option<State>> {
        let v = self.value(&block);
        if v >= state.bound {
            return Ok(None);
        }
        let mut prods = Vec::with_capacity(2 * state.prods.len() + 1);
        prods.push(v.clone());
        prods.extend(state.prods.iter().map(|p| p * &v));
        for p in &prods {
            if nu(p)? != state.class {
                return Ok(None);
            }
        }
        let mut sums = Vec::new();
        let mut bound = v.clone();
        if self.sum_closed {
            sums.push(v.clone());
            sums.extend(state.sums.iter().map(|s| s + &v));
            for s in &sums {
                if nu(s)? != state.class {
                    return Ok(None);
                }
            }
            for s in state.sums.iter().chain(&sums) {
                bound = bound.min(openness_radius(s)?.radius);
            }
        }
        let mut next = state.clone();
        next.blocks.push(block);
        next.ys.push(v);
        next.prods.extend(prods);
        next.sums.extend(sums);
        next.bound = bound.min(state.bound.clone());
        Ok(Some(next))
    }

    fn descend(&mut self, state: &State) -> Result<()> {
        self.best = self.best.max(state.ys.len());
        if state.ys.len() == self.m {
            self.found = Some(state.blocks.clone());
            return Ok(());
        }
        let start = state.blocks.last().map_or(0, |b| b[b.len() - 1] + 1);
        for block in blocks_from(start, self.base.len(), self.max_block) {
            if !self.tick() {
                return Ok(());
            }
            if let Some(next) = self.extend(state, block)? {
                self.descend(&next)?;
                if self.found.is_some() || self.stopped {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

struct BranchOutcome {
    nodes: u64,
    best: usize,
    complete: bool,
    found: Option<Vec<Vec<usize>>>,
    error: Option<Error>,
}

fn blocks_search(
    m: usize,
    config: &ConstructConfig,
    table: &PrimeTable,
    sum_closed: bool,
) -> Result<(BlockSystem, NuValue, u64)> {
    if m == 0 {
        return Err(Error::domain("need at least one term"));
    }
    if config.budget == 0 || config.max_block == 0 {
        return Err(Error::domain("budget and block size must be positive"));
    }
    let indices = reciprocal_prime_indices(config.base_terms.max(m), table)?;
    let base: Vec<Rational> =
        indices.iter().map(|&r| Rational::from_parts(1, table.nth_prime(r)?)).collect::<Result<_>>()?;
    let roots = blocks_from(0, base.len(), config.max_block);
    let cutoff = AtomicUsize::new(usize::MAX);

    let explore = || -> Vec<BranchOutcome> {
        roots
            .par_iter()
            .enumerate()
            .map(|(i, root)| {
                let mut walk = Walk {
                    base: &base,
                    m,
                    max_block: config.max_block,
                    sum_closed,
                    cap: config.budget,
                    index: i,
                    cutoff: &cutoff,
                    nodes: 0,
                    best: 0,
                    found: None,
                    stopped: false,
                };
                let mut error = None;
                if walk.tick() {
                    let y = walk.value(root);
                    let mut run = || -> Result<()> {
                        let class = nu(&y)?;
                        if !class.is_open_class() {
                            return Ok(());
                        }
                        let bound = if sum_closed { openness_radius(&y)?.radius.min(y.clone()) } else { y.clone() };
                        let state = State {
                            blocks: vec![root.clone()],
                            ys: vec![y.clone()],
                            prods: vec![y.clone()],
                            sums: if sum_closed { vec![y.clone()] } else { Vec::new() },
                            class,
                            bound,
                        };
                        walk.descend(&state)
                    };
                    if let Err(e) = run() {
                        error = Some(e);
                    }
                }
                if walk.found.is_some() || walk.stopped || error.is_some() {
                    cutoff.fetch_min(i, AtomicOrdering::Relaxed);
                }
                BranchOutcome {
                    nodes: walk.nodes,
                    best: walk.best,
                    complete: !walk.stopped,
                    found: walk.found,
                    error,
                }
            })
            .collect()
    };
    let outcomes = if config.workers == 0 {
        explore()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::internal(format!("thread pool: {e}")))?
            .install(explore)
    };

    let mut spent = 0u64;
    let mut best = 0;
    for o in outcomes {
        if let Some(e) = o.error {
            return Err(e);
        }
        let within = spent + o.nodes <= config.budget;
        if within {
            best = best.max(o.best);
        }
        if let (Some(blocks), true) = (o.found, within) {
            let blocks = blocks.iter().map(|b| b.iter().map(|t| t + 1).collect()).collect();
            let system = BlockSystem::new(table, indices.clone(), blocks)?;
            let class = nu(&system.terms[0])?;
            return Ok((system, class, spent + o.nodes));
        }
        if !o.complete || !within {
            return Err(Error::BudgetExhausted { nodes: config.budget, best_depth: best });
        }
        spent += o.nodes;
    }
    Err(Error::domain(format!(
        "no {m}-term system over {} base terms with blocks of at most {} (searched {spent} nodes, best depth {best})",
        base.len(),
        config.max_block
    )))
}

/// Blocks whose `2^m - 1` finite products all share one `nu` class.
pub fn find_product_subsystem(m: usize, config: &ConstructConfig, table: &PrimeTable) -> Result<ProductSubsystem> {
    let (system, class, nodes) = blocks_search(m, config, table, false)?;
    Ok(ProductSubsystem { system, colour: class.to_string(), nodes })
}

/// `m` terms whose finite sums and products are all `mu`-monochromatic,
/// certified by a full recheck.
pub fn extend_sum_closed(m: usize, config: &ConstructConfig, table: Arc<PrimeTable>) -> Result<Construction> {
    let (system, class, nodes) = blocks_search(m, config, &table, true)?;
    system.check_shape()?;
    let mu = Mu { table: table.clone() };
    let certificate = check(&mu, &system.terms, CombinationMode::FiniteFsFp)?;
    if !matches!(certificate.verdict, Verdict::Monochromatic(_)) {
        return Err(Error::internal(format!("construction is not mu-monochromatic: {:?}", certificate.verdict)));
    }
    for entry in &certificate.combinations {
        if !minimal_digit_fact(&entry.value, &table)? {
            return Err(Error::internal(format!("{} = {} has a digit outside position -1", entry.tag, entry.value)));
        }
    }
    Ok(Construction {
        terms: system.terms.clone(),
        system,
        colour: class.to_string(),
        prime_table: table.len(),
        nodes,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn base_indices_start_at_three() {
        let t = PrimeTable::new(200);
        assert_eq!(reciprocal_prime_indices(1, &t).unwrap(), [2]);
        let r = reciprocal_prime_indices(4, &t).unwrap();
        assert_eq!(r, [2, 6, 9, 15]);
        assert!(reciprocal_prime_indices(0, &t).is_err());
        assert!(matches!(reciprocal_prime_indices(12, &t), Err(Error::PrimeIndex { .. })));
    }

    #[test]
    fn radius_examples() {
        let r = openness_radius(&q("11/4")).unwrap();
        assert_eq!(r.colour, "nu:t:0,1,2,1,1");
        let end = &r.center + &r.radius;
        assert!(&end * &end < q("8"));
        assert!(r.radius > q("1/20"));

        let r = openness_radius(&q("5/6")).unwrap();
        assert!(r.radius <= q("1/24"));
        assert!(r.radius > q("1/32"));

        assert!(matches!(openness_radius(&q("8")), Err(Error::Domain(_))));
    }

    #[test]
    fn digit_fact_examples() {
        let t = PrimeTable::default_shared();
        assert!(minimal_digit_fact(&q("1/3"), &t).unwrap());
        assert!(!minimal_digit_fact(&q("1/96"), &t).unwrap());
        assert!(minimal_digit_fact(&q("5/6"), &t).unwrap());
        assert!(minimal_digit_fact(&q("3/2"), &t).is_err());
    }

    #[test]
    fn single_term() {
        let table = table_for(DEFAULT_BASE_TERMS).unwrap();
        let config = ConstructConfig::default();
        let sub = find_product_subsystem(1, &config, &table).unwrap();
        assert_eq!(sub.system.blocks, [vec![1]]);
        assert_eq!(sub.system.terms, [q("1/3")]);
        assert_eq!(sub.colour, nu(&q("1/3")).unwrap().to_string());
        let c = extend_sum_closed(1, &config, table).unwrap();
        assert_eq!(c.certificate.combinations.len(), 2);
    }

    #[test]
    fn blocks_enumerate_in_order() {
        let b = blocks_from(1, 4, 2);
        assert_eq!(b, [vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
