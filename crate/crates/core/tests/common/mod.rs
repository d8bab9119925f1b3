#![allow(dead_code)]

pub mod equivalence;
pub mod oracle;

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use monochrome::{Colouring, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All `size`-element index subsets of `0..n` in lexicographic order.
pub fn index_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..size).rev().find(|&i| cur[i] < n - size + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Pairwise sums and products, or sums and products over every nonempty
/// subset, written out directly.
pub fn naive_combination_values(xs: &[Rational], finite: bool) -> Vec<Rational> {
    let mut out = Vec::new();
    if finite {
        for mask in 1u32..(1 << xs.len()) {
            let picked: Vec<&Rational> = (0..xs.len()).filter(|i| mask >> i & 1 == 1).map(|i| &xs[i]).collect();
            out.push(picked.iter().skip(1).fold(picked[0].clone(), |acc, x| &acc + *x));
            out.push(picked.iter().skip(1).fold(picked[0].clone(), |acc, x| &acc * *x));
        }
    } else {
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                out.push(&xs[i] + &xs[j]);
                out.push(&xs[i] * &xs[j]);
            }
        }
    }
    out
}

pub struct NaiveSearch {
    pub max_size: usize,
    pub hits: Vec<Vec<Rational>>,
}

/// Every subset of every size, coloured without pruning. Stops growing once
/// a size has no monochromatic subset.
pub fn naive_search(colouring: &dyn Colouring, universe: &[Rational], finite: bool, target: usize) -> NaiveSearch {
    let mut cache: HashMap<Rational, String> = HashMap::new();
    let mut mono = |xs: &[Rational]| -> bool {
        let keys: Vec<String> = naive_combination_values(xs, finite)
            .into_iter()
            .map(|v| cache.entry(v.clone()).or_insert_with(|| colouring.key(&v).unwrap()).clone())
            .collect();
        keys.windows(2).all(|w| w[0] == w[1])
    };
    let mut all_of_size = |size: usize| -> Vec<Vec<Rational>> {
        index_subsets(universe.len(), size)
            .into_iter()
            .map(|idx| idx.iter().map(|&i| universe[i].clone()).collect::<Vec<_>>())
            .filter(|xs| mono(xs))
            .collect()
    };
    let mut max_size = 0;
    let mut hits = None;
    let mut size = 1;
    loop {
        let found = all_of_size(size);
        if size == target {
            hits = Some(found.clone());
        }
        if found.is_empty() {
            break;
        }
        max_size = size;
        size += 1;
    }
    let hits = hits.unwrap_or_else(|| all_of_size(target));
    NaiveSearch { max_size, hits }
}
