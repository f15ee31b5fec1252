//! Small helpers for 1-based permutations stored as `Vec<usize>`.

use crate::error::{GridError, Result};

/// Checks that `p` is a permutation of `1..=p.len()`.
pub fn check_permutation(p: &[usize]) -> Result<()> {
    let n = p.len();
    let mut seen = vec![false; n + 1];
    for (i, &v) in p.iter().enumerate() {
        if v == 0 || v > n || seen[v] {
            return Err(GridError::NotAPermutation {
                n,
                position: i + 1,
                value: v,
            });
        }
        seen[v] = true;
    }
    Ok(())
}

pub fn is_permutation(p: &[usize]) -> bool {
    check_permutation(p).is_ok()
}

pub fn is_derangement(p: &[usize]) -> bool {
    is_permutation(p) && p.iter().enumerate().all(|(i, &v)| v != i + 1)
}

/// Inverse of a 1-based permutation.
pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    inv
}

/// Number of cycles, fixed points included.
pub fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] - 1;
        }
    }
    cycles
}

/// Advances `p` to the next permutation in lexicographic order. Returns
/// `false` (leaving `p` sorted ascending) once the last one has been passed.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        p.reverse();
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Relabels distinct values to `1..=len` preserving their relative order.
pub fn compact(values: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&i| values[i]);
    let mut out = vec![0; values.len()];
    for (rank, i) in order.into_iter().enumerate() {
        out[i] = rank + 1;
    }
    out
}
