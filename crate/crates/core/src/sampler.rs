//! Seeded generation of random diagrams and knots.
//!
//! Every draw comes from a [`RandomStream`], a ChaCha8 generator keyed by a
//! 64-bit seed and a 64-bit stream index. The same `(seed, stream_index)`
//! pair replays the same draws on every platform, and distinct indices give
//! independent lanes for parallel workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{KnotLoop, LinkGrid};
use crate::perm::compact;

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        RandomStream {
            seed,
            stream_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform integer in `lo..hi`. Sampled through `u32` so the draw
    /// sequence does not depend on the pointer width.
    pub fn below(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo < hi && hi <= u32::MAX as usize);
        self.rng.random_range(lo as u32..hi as u32) as usize
    }

    pub fn uniform_f64(&mut self) -> f64 {
        self.rng.random()
    }
}

/// Shuffles `values` in place; the first `k` entries are a uniform random
/// arrangement of `k` distinct elements once this returns.
fn partial_shuffle(values: &mut [usize], k: usize, rs: &mut RandomStream) {
    let n = values.len();
    for i in 0..k.min(n.saturating_sub(1)) {
        let j = rs.below(i, n);
        values.swap(i, j);
    }
}

/// Uniform permutation of `1..=n` by Fisher-Yates.
pub fn random_permutation(n: usize, rs: &mut RandomStream) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    partial_shuffle(&mut p, n, rs);
    p
}

/// Uniform random diagram on an `n x n` grid together with the number of
/// permutation pairs drawn before one without collisions turned up.
pub fn sample_link_counted(n: usize, rs: &mut RandomStream) -> (LinkGrid, u64) {
    assert!(n >= 2, "grid size must be at least 2");
    let mut attempts = 0;
    loop {
        attempts += 1;
        let black_col = random_permutation(n, rs);
        let white_col = random_permutation(n, rs);
        if black_col.iter().zip(&white_col).all(|(b, w)| b != w) {
            return (
                LinkGrid {
                    black_col,
                    white_col,
                },
                attempts,
            );
        }
    }
}

/// Uniform random diagram on an `n x n` grid (rejection on collisions).
pub fn sample_link(n: usize, rs: &mut RandomStream) -> LinkGrid {
    sample_link_counted(n, rs).0
}

/// Uniform knot filling the whole `n x n` grid: `rho` is uniform subject to
/// `rho[0] = 1` and `kappa` is uniform.
pub fn sample_full_knot(n: usize, rs: &mut RandomStream) -> KnotLoop {
    assert!(n >= 2, "grid size must be at least 2");
    let mut rho: Vec<usize> = (1..=n).collect();
    partial_shuffle(&mut rho[1..], n - 1, rs);
    let kappa = random_permutation(n, rs);
    KnotLoop::from_canonical(rho, kappa)
}

/// Grows a knot step by step inside an `n x n` grid until it returns to its
/// starting row, and returns it relabelled onto its own `s x s` grid.
///
/// The rows after the start are read off a uniform permutation of `1..=n`;
/// the knot closes at the position `s` where row 1 appears. Draws with
/// `s = 1` (an empty knot) are discarded. The size is uniform on `2..=n`.
pub fn sample_closing_knot(n: usize, rs: &mut RandomStream) -> KnotLoop {
    assert!(n >= 2, "grid size must be at least 2");
    let mut pool: Vec<usize> = (1..=n).collect();
    let s = loop {
        pool.iter_mut().enumerate().for_each(|(i, v)| *v = i + 1);
        let mut closed_at = n;
        for i in 0..n {
            let j = rs.below(i, n);
            pool.swap(i, j);
            if pool[i] == 1 {
                closed_at = i + 1;
                break;
            }
        }
        if closed_at > 1 {
            break closed_at;
        }
    };
    let mut rows = Vec::with_capacity(s);
    rows.push(1);
    rows.extend_from_slice(&pool[..s - 1]);

    let mut cols: Vec<usize> = (1..=n).collect();
    partial_shuffle(&mut cols, s, rs);
    cols.truncate(s);

    KnotLoop::from_canonical(compact(&rows), compact(&cols))
}
