//! Exhaustive walks over every diagram of a small grid.
//!
//! Diagrams are produced as (black permutation, derangement) pairs, both in
//! lexicographic order, without materialising the full list.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{GridError, Result};
use crate::grid::LinkGrid;
use crate::invariants::component_count;
use crate::perm::{is_derangement, next_permutation};

/// Largest grid enumerated without an explicit override.
pub const DEFAULT_LIMIT: usize = 7;
/// Largest grid enumerated at all (about 595 million diagrams).
pub const OVERRIDE_LIMIT: usize = 8;

fn check_size(n: usize, allow_override: bool) -> Result<()> {
    if n < 2 {
        return Err(GridError::TooSmall(n, 2));
    }
    let limit = if allow_override {
        OVERRIDE_LIMIT
    } else {
        DEFAULT_LIMIT
    };
    if n > limit {
        return Err(GridError::SizeLimitExceeded { n, limit });
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (1..=n).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

fn derangements(n: usize) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| is_derangement(p))
        .collect()
}

/// Calls `visitor` once for every valid `n x n` diagram.
pub fn enumerate_links<F>(n: usize, allow_override: bool, mut visitor: F) -> Result<()>
where
    F: FnMut(&LinkGrid),
{
    check_size(n, allow_override)?;
    let deltas = derangements(n);
    let mut black: Vec<usize> = (1..=n).collect();
    let mut d = LinkGrid {
        black_col: vec![0; n],
        white_col: vec![0; n],
    };
    loop {
        d.black_col.copy_from_slice(&black);
        for delta in &deltas {
            for (w, &b) in d.white_col.iter_mut().zip(&black) {
                *w = delta[b - 1];
            }
            visitor(&d);
        }
        if !next_permutation(&mut black) {
            break;
        }
    }
    Ok(())
}

/// Histogram of `key` over every `n x n` diagram, computed in parallel by
/// blocks of the outer permutation.
pub fn tally<K>(n: usize, allow_override: bool, key: K) -> Result<BTreeMap<i64, u64>>
where
    K: Fn(&LinkGrid) -> i64 + Sync,
{
    check_size(n, allow_override)?;
    let deltas = derangements(n);
    let outer = permutations(n);
    let merged = outer
        .par_iter()
        .map(|black| {
            let mut hist = BTreeMap::new();
            let mut d = LinkGrid {
                black_col: black.clone(),
                white_col: vec![0; n],
            };
            for delta in &deltas {
                for (w, &b) in d.white_col.iter_mut().zip(black) {
                    *w = delta[b - 1];
                }
                *hist.entry(key(&d)).or_insert(0u64) += 1;
            }
            hist
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(merged)
}

/// Component-count tallies for one grid size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationRow {
    pub n: usize,
    /// `counts[k]` is the number of diagrams with `k` components.
    pub counts: Vec<u64>,
}

impl EnumerationRow {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn c(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn mean_components(&self) -> BigRational {
        let weighted: u64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u64 * c)
            .sum();
        BigRational::new(BigInt::from(weighted), BigInt::from(self.total()))
    }
}

/// Counts the diagrams of each component count by brute force.
pub fn exact_table_by_enumeration(n: usize) -> Result<EnumerationRow> {
    exact_table_by_enumeration_with(n, false)
}

pub fn exact_table_by_enumeration_with(n: usize, allow_override: bool) -> Result<EnumerationRow> {
    let hist = tally(n, allow_override, |d| component_count(d) as i64)?;
    let mut counts = vec![0; n / 2 + 1];
    for (k, c) in hist {
        counts[k as usize] = c;
    }
    Ok(EnumerationRow { n, counts })
}

/// Number of one-component diagrams, found by brute force.
pub fn enumerate_knot_diagrams(n: usize) -> Result<u64> {
    Ok(exact_table_by_enumeration(n)?.c(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::validate_link;
    use std::collections::HashSet;

    #[test]
    fn visits_every_3x3_diagram_once() {
        let mut seen = HashSet::new();
        enumerate_links(3, false, |d| {
            assert!(validate_link(d.black_col().to_vec(), d.white_col().to_vec()).is_ok());
            assert!(seen.insert(d.clone()));
        })
        .unwrap();
        assert_eq!(seen.len(), 12);
    }

    #[test]
    fn visit_count_at_6() {
        let mut count = 0u64;
        enumerate_links(6, false, |_| count += 1).unwrap();
        assert_eq!(count, 190_800);
    }

    #[test]
    fn size_guard() {
        assert_eq!(
            enumerate_links(9, true, |_| {}),
            Err(GridError::SizeLimitExceeded { n: 9, limit: 8 })
        );
        assert_eq!(
            exact_table_by_enumeration(8),
            Err(GridError::SizeLimitExceeded { n: 8, limit: 7 })
        );
        assert_eq!(
            enumerate_links(1, false, |_| {}),
            Err(GridError::TooSmall(1, 2))
        );
    }

    #[test]
    fn small_rows() {
        let row = exact_table_by_enumeration(5).unwrap();
        assert_eq!((row.c(1), row.c(2), row.total()), (2880, 2400, 5280));
        assert_eq!(enumerate_knot_diagrams(2).unwrap(), 2);
        assert_eq!(enumerate_knot_diagrams(4).unwrap(), 144);
    }
}
