//! Bounded depth-first search for monochromatic configurations.
//!
//! Each top-level branch (configurations whose smallest element is universe
//! entry `i`) is explored independently and stamps every visited node with
//! its branch-local count. The merge walks branches in universe order,
//! spending the global budget on whole branches while it lasts and clipping
//! the first branch that overruns it. The result therefore matches a
//! single-threaded run with the same budget whatever the worker count.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colour::Colouring;
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::verify::certificate::{check, Certificate};
use crate::verify::combos::CombinationMode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub target_size: usize,
    /// Work limit. A candidate extension costs 1 in pairwise mode and
    /// `2^d` in finite mode, where `d` terms are already chosen.
    pub budget: u64,
    /// Worker threads; 0 means rayon's default.
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub colouring: String,
    pub mode: CombinationMode,
    pub universe_size: usize,
    pub target_size: usize,
    pub budget: u64,
    pub nodes: u64,
    pub exhaustive: bool,
    pub found: usize,
    pub max_size: usize,
    pub max_witness: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub summary: SearchSummary,
    pub certificates: Vec<Certificate>,
}

enum Stop {
    Cap,
    Cancelled,
    Failed(u64, Error),
}

#[derive(Default)]
struct BranchResult {
    nodes: u64,
    complete: bool,
    hits: Vec<(u64, Vec<usize>)>,
    progress: Vec<(u64, Vec<usize>)>,
    error: Option<(u64, Error)>,
}

struct Keys<'a> {
    colouring: &'a dyn Colouring,
    memo: HashMap<Rational, u32>,
    ids: HashMap<String, u32>,
}

impl<'a> Keys<'a> {
    fn new(colouring: &'a dyn Colouring) -> Self {
        Keys { colouring, memo: HashMap::new(), ids: HashMap::new() }
    }

    fn id(&mut self, x: &Rational) -> Result<u32> {
        if let Some(&id) = self.memo.get(x) {
            return Ok(id);
        }
        let key = self.colouring.key(x)?;
        let next = self.ids.len() as u32;
        let id = *self.ids.entry(key).or_insert(next);
        self.memo.insert(x.clone(), id);
        Ok(id)
    }
}

struct Branch<'a, 'k, 'c> {
    universe: &'a [Rational],
    mode: CombinationMode,
    target: usize,
    cap: u64,
    index: usize,
    cutoff: &'a AtomicUsize,
    keys: &'k mut Keys<'c>,
    nodes: u64,
    best: usize,
    hits: Vec<(u64, Vec<usize>)>,
    progress: Vec<(u64, Vec<usize>)>,
    stop: Option<Stop>,
}

impl Branch<'_, '_, '_> {
    fn record(&mut self, stamp: u64, chosen: &[usize]) {
        if chosen.len() > self.best {
            self.best = chosen.len();
            self.progress.push((stamp, chosen.to_vec()));
        }
        if chosen.len() == self.target {
            self.hits.push((stamp, chosen.to_vec()));
        }
    }

    /// Extend `chosen`; `sums`/`prods` hold every subset sum/product of it in
    /// finite mode and are unused in pairwise mode.
    fn descend(&mut self, chosen: &mut Vec<usize>, key: Option<u32>, sums: &[Rational], prods: &[Rational]) {
        let start = chosen.last().map_or(0, |&c| c + 1);
        for j in start..self.universe.len() {
            if self.cutoff.load(Ordering::Relaxed) < self.index {
                self.stop = Some(Stop::Cancelled);
                return;
            }
            let cost = match self.mode {
                CombinationMode::Pairwise => 1,
                CombinationMode::FiniteFsFp => 1u64.checked_shl(chosen.len() as u32).unwrap_or(u64::MAX),
            };
            if self.cap - self.nodes < cost {
                self.stop = Some(Stop::Cap);
                return;
            }
            self.nodes += cost;
            let stamp = self.nodes;
            let x = &self.universe[j];

            let (new_sums, new_prods): (Vec<Rational>, Vec<Rational>) = match self.mode {
                CombinationMode::Pairwise => (
                    chosen.iter().map(|&c| &self.universe[c] + x).collect(),
                    chosen.iter().map(|&c| &self.universe[c] * x).collect(),
                ),
                CombinationMode::FiniteFsFp => (
                    std::iter::once(x.clone()).chain(sums.iter().map(|s| s + x)).collect(),
                    std::iter::once(x.clone()).chain(prods.iter().map(|p| p * x)).collect(),
                ),
            };
            let mut k = key;
            let mut ok = true;
            for v in new_sums.iter().chain(&new_prods) {
                let id = match self.keys.id(v) {
                    Ok(id) => id,
                    Err(e) => {
                        self.stop = Some(Stop::Failed(stamp, e));
                        return;
                    }
                };
                match k {
                    None => k = Some(id),
                    Some(k0) if k0 != id => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
            if !ok {
                continue;
            }
            chosen.push(j);
            self.record(stamp, chosen);
            match self.mode {
                CombinationMode::Pairwise => self.descend(chosen, k, &[], &[]),
                CombinationMode::FiniteFsFp => {
                    let mut s = sums.to_vec();
                    s.extend(new_sums);
                    let mut p = prods.to_vec();
                    p.extend(new_prods);
                    self.descend(chosen, k, &s, &p);
                }
            }
            chosen.pop();
            if self.stop.is_some() {
                return;
            }
        }
    }
}

fn run_branch(
    keys: &mut Keys<'_>,
    universe: &[Rational],
    mode: CombinationMode,
    target: usize,
    cap: u64,
    index: usize,
    cutoff: &AtomicUsize,
) -> BranchResult {
    let mut branch = Branch {
        universe,
        mode,
        target,
        cap,
        index,
        cutoff,
        keys,
        nodes: 0,
        best: 0,
        hits: Vec::new(),
        progress: Vec::new(),
        stop: None,
    };
    let x = &universe[index];
    let mut chosen = vec![index];
    // the root itself is free; only extensions count against the budget
    match mode {
        CombinationMode::Pairwise => {
            branch.record(0, &chosen);
            branch.descend(&mut chosen, None, &[], &[]);
        }
        CombinationMode::FiniteFsFp => match branch.keys.id(x) {
            Ok(id) => {
                branch.record(0, &chosen);
                branch.descend(&mut chosen, Some(id), std::slice::from_ref(x), std::slice::from_ref(x));
            }
            Err(e) => branch.stop = Some(Stop::Failed(0, e)),
        },
    }
    let mut result = BranchResult {
        nodes: branch.nodes,
        complete: branch.stop.is_none(),
        hits: branch.hits,
        progress: branch.progress,
        error: None,
    };
    if let Some(Stop::Failed(stamp, e)) = branch.stop {
        result.error = Some((stamp, e));
    }
    result
}

/// Search `universe` (taken in the given order) for configurations of
/// exactly `target_size` elements whose combinations share one colour key.
pub fn search(
    colouring: &dyn Colouring,
    universe: &[Rational],
    mode: CombinationMode,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    if config.target_size < 2 {
        return Err(Error::domain("target size must be at least 2"));
    }
    if config.budget == 0 {
        return Err(Error::domain("budget must be at least 1"));
    }
    {
        let mut seen = std::collections::HashSet::new();
        if let Some(x) = universe.iter().find(|x| !seen.insert(*x)) {
            return Err(Error::domain(format!("universe repeats {x}")));
        }
    }
    let budget = config.budget;
    let cutoff = AtomicUsize::new(usize::MAX);

    let explore = || -> Vec<BranchResult> {
        (0..universe.len())
            .into_par_iter()
            .map_init(
                || Keys::new(colouring),
                |keys, i| {
                    if cutoff.load(Ordering::Relaxed) < i {
                        return BranchResult::default();
                    }
                    let r = run_branch(keys, universe, mode, config.target_size, budget, i, &cutoff);
                    if !r.complete || r.error.is_some() {
                        cutoff.fetch_min(i, Ordering::Relaxed);
                    }
                    r
                },
            )
            .collect()
    };
    let results = if config.workers == 0 {
        explore()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::internal(format!("thread pool: {e}")))?
            .install(explore)
    };

    let mut remaining = budget;
    let mut nodes = 0u64;
    let mut exhaustive = true;
    let mut hits: Vec<Vec<usize>> = Vec::new();
    let mut best: Option<Vec<usize>> = None;
    for r in results {
        let whole = r.complete && r.nodes <= remaining;
        let limit = if whole { u64::MAX } else { remaining };
        if let Some((stamp, e)) = r.error {
            if stamp <= remaining {
                return Err(e);
            }
        }
        for (stamp, set) in r.progress {
            if stamp <= limit && best.as_ref().is_none_or(|b| set.len() > b.len()) {
                best = Some(set);
            }
        }
        hits.extend(r.hits.into_iter().filter(|(s, _)| *s <= limit).map(|(_, set)| set));
        if whole {
            remaining -= r.nodes;
            nodes += r.nodes;
        } else {
            nodes += remaining;
            exhaustive = false;
            break;
        }
    }

    let certificates = hits
        .iter()
        .map(|set| {
            let xs: Vec<Rational> = set.iter().map(|&i| universe[i].clone()).collect();
            check(colouring, &xs, mode)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_witness: Vec<Rational> = best.unwrap_or_default().iter().map(|&i| universe[i].clone()).collect();
    Ok(SearchOutcome {
        summary: SearchSummary {
            colouring: colouring.id().to_string(),
            mode,
            universe_size: universe.len(),
            target_size: config.target_size,
            budget,
            nodes,
            exhaustive,
            found: certificates.len(),
            max_size: max_witness.len(),
            max_witness,
        },
        certificates,
    })
}
