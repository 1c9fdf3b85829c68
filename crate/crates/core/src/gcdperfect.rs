//! Gcd-perfect sets: finite `S` such that for every `s ∈ S` and every divisor
//! `d | s` exactly one `t ∈ S` has `gcd(s, t) = d`.
//!
//! Such sets have size `0` or `2^k`. [`construct`] builds the `2^k` witnesses
//! from `k` prime pairs, [`structure_report`] checks that a perfect set is
//! made of squarefree products of exactly `k` primes, and [`search_size`]
//! exhaustively enumerates small perfect sets of a given size.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{factorize, gcd, is_prime, Factorization};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcdSetError {
    #[error("elements must be positive integers")]
    ZeroElement,
    #[error("element {0} appears more than once")]
    Duplicate(u64),
    #[error("construct needs exactly k = {k} primes in each list (got {p} and {q})")]
    WrongPrimeCount { k: usize, p: usize, q: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is repeated")]
    RepeatedPrime(u64),
    #[error("2^{0} elements do not fit in a u64 product")]
    TooLarge(usize),
    #[error("target size must be positive")]
    ZeroTarget,
    #[error("max element {0} exceeds the supported limit of 10000")]
    MaxElementTooLarge(u64),
    #[error("search exceeded the node budget of {budget} nodes")]
    NodeBudgetExceeded { budget: u64 },
}

/// Structural alarm raised when a set that passed the checker contradicts
/// the classification theorem. Should never occur.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureAlarm {
    #[error("set is not gcd-perfect; structure theorem does not apply")]
    NotPerfect,
    #[error("the empty set has no prime count")]
    Empty,
    #[error("element {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("elements {first} and {second} have different prime counts")]
    UnequalPrimeCounts { first: u64, second: u64 },
    #[error("|S| = {size} but 2^k = {expected}")]
    SizeMismatch { size: usize, expected: u128 },
}

/// A finite set of distinct positive integers, kept sorted, with each
/// element's factorization cached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdSet {
    elements: Vec<u64>,
    #[serde(skip)]
    factorizations: Vec<Factorization>,
}

impl GcdSet {
    pub fn new(elements: impl IntoIterator<Item = u64>) -> Result<Self, GcdSetError> {
        let mut sorted: Vec<u64> = elements.into_iter().collect();
        sorted.sort_unstable();
        if sorted.first() == Some(&0) {
            return Err(GcdSetError::ZeroElement);
        }
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GcdSetError::Duplicate(w[0]));
        }
        let factorizations = sorted.iter().map(|&s| factorize(s).expect("nonzero")).collect();
        Ok(Self { elements: sorted, factorizations })
    }

    pub fn empty() -> Self {
        Self { elements: Vec::new(), factorizations: Vec::new() }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn factorizations(&self) -> &[Factorization] {
        &self.factorizations
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `count` elements `t` satisfy `gcd(s, t) = d`, where exactly one was required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdFailure {
    pub s: u64,
    pub d: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectionReport {
    pub verdict: bool,
    pub witness_failure: Option<GcdFailure>,
    pub size: usize,
}

/// First `(s, d)` (in ascending order) whose gcd count is not one.
fn first_failure_for(set: &GcdSet, idx: usize) -> Option<GcdFailure> {
    let s = set.elements[idx];
    set.factorizations[idx].divisors().into_iter().find_map(|d| {
        let count = set.elements.iter().filter(|&&t| gcd(s, t) == d).count();
        (count != 1).then_some(GcdFailure { s, d, count })
    })
}

/// Checks the definition directly, `s = t` allowed.
pub fn is_gcd_perfect(set: &GcdSet) -> PerfectionReport {
    let size = set.len();
    // |S| = d(s) is necessary; when it fails some divisor of s has count != 1,
    // so look there first for the witness
    let mismatch = (0..size).find(|&i| set.factorizations[i].divisor_count() != size as u64);
    let witness_failure = match mismatch {
        Some(i) => first_failure_for(set, i),
        None => (0..size).find_map(|i| first_failure_for(set, i)),
    };
    PerfectionReport { verdict: witness_failure.is_none(), witness_failure, size }
}

/// `{ Π_{i∈I} p_i · Π_{j∉I} q_j : I ⊆ {1..k} }`.
pub fn construct(p: &[u64], q: &[u64]) -> Result<GcdSet, GcdSetError> {
    let k = p.len();
    if q.len() != k {
        return Err(GcdSetError::WrongPrimeCount { k, p: p.len(), q: q.len() });
    }
    let mut seen = BTreeSet::new();
    for &prime in p.iter().chain(q) {
        if !is_prime(prime) {
            return Err(GcdSetError::NotPrime(prime));
        }
        if !seen.insert(prime) {
            return Err(GcdSetError::RepeatedPrime(prime));
        }
    }
    if k >= 64 {
        return Err(GcdSetError::TooLarge(k));
    }
    let mut elements = Vec::with_capacity(1 << k);
    for mask in 0u64..(1 << k) {
        let mut product = 1u64;
        for i in 0..k {
            let factor = if mask >> i & 1 == 1 { p[i] } else { q[i] };
            product = product.checked_mul(factor).ok_or(GcdSetError::TooLarge(k))?;
        }
        elements.push(product);
    }
    GcdSet::new(elements)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Common number of distinct primes per element.
    pub k: usize,
    pub size: usize,
}

/// For a nonempty perfect set: every element squarefree with the same prime
/// count `k` and `|S| = 2^k`. The empty set has no `k` and is rejected.
pub fn structure_report(set: &GcdSet) -> Result<StructureReport, StructureAlarm> {
    if !is_gcd_perfect(set).verdict {
        return Err(StructureAlarm::NotPerfect);
    }
    let Some(first) = set.factorizations.first() else {
        return Err(StructureAlarm::Empty);
    };
    let k = first.prime_count();
    for f in &set.factorizations {
        if !f.is_squarefree() {
            return Err(StructureAlarm::NotSquarefree(f.value));
        }
        if f.prime_count() != k {
            return Err(StructureAlarm::UnequalPrimeCounts { first: first.value, second: f.value });
        }
    }
    let expected = 1u128 << k;
    if set.len() as u128 != expected {
        return Err(StructureAlarm::SizeMismatch { size: set.len(), expected });
    }
    Ok(StructureReport { k, size: set.len() })
}

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const MAX_SEARCH_ELEMENT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub sets: Vec<GcdSet>,
    /// Candidates with `d(s) = target_size`.
    pub candidate_pool: Vec<u64>,
    pub nodes_visited: u64,
}

struct Search<'a> {
    pool: &'a [u64],
    target: usize,
    budget: u64,
    nodes: u64,
    chosen: Vec<u64>,
    // gcd values already realised against each chosen element
    seen: Vec<BTreeSet<u64>>,
    found: Vec<GcdSet>,
}

impl Search<'_> {
    fn extend(&mut self, start: usize) -> Result<(), GcdSetError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(GcdSetError::NodeBudgetExceeded { budget: self.budget });
        }
        if self.chosen.len() == self.target {
            let set = GcdSet::new(self.chosen.iter().copied()).expect("pool elements are distinct");
            if is_gcd_perfect(&set).verdict {
                self.found.push(set);
            }
            return Ok(());
        }
        let needed = self.target - self.chosen.len();
        for idx in start..self.pool.len() {
            if self.pool.len() - idx < needed {
                break;
            }
            let t = self.pool[idx];
            // forward check: the new element may not repeat a gcd value for any
            // chosen s, nor may its own gcd values against the chosen collide
            let gcds: Vec<u64> = self.chosen.iter().map(|&s| gcd(s, t)).collect();
            if gcds.contains(&t) {
                // gcd(s, t) = t = gcd(t, t) would repeat t's own divisor t
                continue;
            }
            let mut own = BTreeSet::new();
            let clash = gcds.iter().zip(&self.seen).any(|(g, seen)| seen.contains(g)) || !gcds.iter().all(|g| own.insert(*g));
            if clash {
                continue;
            }
            for (g, seen) in gcds.iter().zip(self.seen.iter_mut()) {
                seen.insert(*g);
            }
            let mut own_seen = own;
            own_seen.insert(t);
            self.chosen.push(t);
            self.seen.push(own_seen);
            let result = self.extend(idx + 1);
            self.chosen.pop();
            self.seen.pop();
            for (g, seen) in gcds.iter().zip(self.seen.iter_mut()) {
                seen.remove(g);
            }
            result?;
        }
        Ok(())
    }
}

/// Every gcd-perfect `S ⊆ [1, max_element]` with `|S| = target_size`, sorted
/// lexicographically.
///
/// Only elements with `d(s) = target_size` can appear, and partial sets are
/// pruned as soon as some chosen element sees a repeated gcd value.
pub fn search_size(target_size: usize, max_element: u64, node_budget: u64) -> Result<SearchOutcome, GcdSetError> {
    if target_size == 0 {
        return Err(GcdSetError::ZeroTarget);
    }
    if max_element > MAX_SEARCH_ELEMENT {
        return Err(GcdSetError::MaxElementTooLarge(max_element));
    }
    let pool: Vec<u64> = (1..=max_element)
        .filter(|&s| factorize(s).expect("positive").divisor_count() == target_size as u64)
        .collect();
    let mut search = Search {
        pool: &pool,
        target: target_size,
        budget: node_budget,
        nodes: 0,
        chosen: Vec::new(),
        seen: Vec::new(),
        found: Vec::new(),
    };
    search.extend(0)?;
    let nodes_visited = search.nodes;
    let mut sets = search.found;
    sets.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(SearchOutcome { sets, candidate_pool: pool, nodes_visited })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> GcdSet {
        GcdSet::new(xs.iter().copied()).unwrap()
    }

    /// Literal definition, no shortcuts.
    fn brute_force_perfect(xs: &[u64]) -> bool {
        xs.iter().all(|&s| (1..=s).filter(|d| s % d == 0).all(|d| xs.iter().filter(|&&t| gcd(s, t) == d).count() == 1))
    }

    #[test]
    fn checker_examples() {
        assert!(is_gcd_perfect(&GcdSet::empty()).verdict);
        let four = is_gcd_perfect(&set(&[6, 14, 15, 35]));
        assert!(four.verdict);
        assert_eq!(four.size, 4);
        assert!(brute_force_perfect(&[6, 14, 15, 35]));
        let two = is_gcd_perfect(&set(&[2]));
        assert!(!two.verdict);
        assert_eq!(two.witness_failure, Some(GcdFailure { s: 2, d: 1, count: 0 }));
    }

    #[test]
    fn checker_agrees_with_definition_on_small_sets() {
        // every subset of [1, 12] of size <= 4
        let universe: Vec<u64> = (1..=12).collect();
        for mask in 0u32..(1 << universe.len()) {
            if mask.count_ones() > 4 {
                continue;
            }
            let xs: Vec<u64> = universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            assert_eq!(is_gcd_perfect(&set(&xs)).verdict, brute_force_perfect(&xs), "{xs:?}");
        }
    }

    #[test]
    fn set_rejects_bad_input() {
        assert_eq!(GcdSet::new([3, 0]), Err(GcdSetError::ZeroElement));
        assert_eq!(GcdSet::new([3, 5, 3]), Err(GcdSetError::Duplicate(3)));
    }

    #[test]
    fn construct_examples() {
        assert_eq!(construct(&[], &[]).unwrap().elements(), &[1]);
        assert_eq!(construct(&[2], &[3]).unwrap().elements(), &[2, 3]);
        // index i contributes p_i or q_i: {2,3} x {5,7}
        let k2 = construct(&[2, 5], &[3, 7]).unwrap();
        assert_eq!(k2.elements(), &[10, 14, 15, 21]);
        assert!(is_gcd_perfect(&k2).verdict);
        let k2 = construct(&[2, 3], &[5, 7]).unwrap();
        assert_eq!(k2.elements(), &[6, 14, 15, 35]);
        assert_eq!(construct(&[2, 3], &[3, 7]), Err(GcdSetError::RepeatedPrime(3)));
        assert_eq!(construct(&[4], &[3]), Err(GcdSetError::NotPrime(4)));
        assert!(matches!(construct(&[2], &[]), Err(GcdSetError::WrongPrimeCount { .. })));
    }

    #[test]
    fn structure_examples() {
        assert_eq!(structure_report(&set(&[6, 14, 15, 35])).unwrap().k, 2);
        assert_eq!(structure_report(&set(&[1])).unwrap().k, 0);
        assert_eq!(structure_report(&set(&[2, 3])).unwrap().k, 1);
        assert_eq!(structure_report(&set(&[2])), Err(StructureAlarm::NotPerfect));
        assert_eq!(structure_report(&GcdSet::empty()), Err(StructureAlarm::Empty));
    }

    #[test]
    fn search_examples() {
        let three = search_size(3, 100, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(three.candidate_pool, vec![4, 9, 25, 49]);
        assert!(three.sets.is_empty());

        let five = search_size(5, 500, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(five.candidate_pool, vec![16, 81]);
        assert!(five.sets.is_empty());

        let two = search_size(2, 10, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(two.candidate_pool, vec![2, 3, 5, 7]);
        let found: Vec<&[u64]> = two.sets.iter().map(|s| s.elements()).collect();
        assert_eq!(found, vec![&[2, 3][..], &[2, 5], &[2, 7], &[3, 5], &[3, 7], &[5, 7]]);
        assert!(two.sets.iter().all(|s| is_gcd_perfect(s).verdict));
    }

    #[test]
    fn search_size_four_contains_the_construction() {
        let four = search_size(4, 100, DEFAULT_NODE_BUDGET).unwrap();
        assert!(four.sets.iter().any(|s| s.elements() == [6, 14, 15, 35]));
        for s in &four.sets {
            assert!(brute_force_perfect(s.elements()));
            assert_eq!(structure_report(s).unwrap().k, 2);
        }
    }

    #[test]
    fn search_guards() {
        assert_eq!(search_size(0, 10, 10), Err(GcdSetError::ZeroTarget));
        assert_eq!(search_size(2, 10_001, 10), Err(GcdSetError::MaxElementTooLarge(10_001)));
        assert_eq!(search_size(2, 100, 5), Err(GcdSetError::NodeBudgetExceeded { budget: 5 }));
    }
}
