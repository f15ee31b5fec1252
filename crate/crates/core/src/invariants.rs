//! Component count, crossings, writhe, and knot size and length.

use serde::{Deserialize, Serialize};

use crate::grid::{KnotLoop, LinkGrid, Orientation};
use crate::perm::cycle_count;

/// A crossing of a vertical (over) arc with a horizontal (under) arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub row: usize,
    pub col: usize,
    pub sign: i32,
}

/// Number of link components: the cycle count of the row transition.
pub fn component_count(d: &LinkGrid) -> usize {
    cycle_count(&d.transition_permutation())
}

/// Counts components by walking the arcs themselves, vertical then
/// horizontal, until each closed curve returns to its first arc.
pub fn component_count_geometric(d: &LinkGrid) -> usize {
    let n = d.n();
    let arcs = d.arcs();
    let (vertical, horizontal) = arcs.split_at(n);
    let mut visited = vec![false; n];
    let mut components = 0;
    for first in 0..n {
        if visited[first] {
            continue;
        }
        components += 1;
        let mut col = first + 1;
        while !visited[col - 1] {
            visited[col - 1] = true;
            let v = vertical[col - 1];
            debug_assert_eq!(v.orientation, Orientation::Vertical);
            let h = horizontal[v.to - 1];
            debug_assert_eq!(h.from, col, "arcs must meet at a white dot");
            col = h.to;
        }
    }
    components
}

/// Every crossing, found by checking each vertical arc against each
/// horizontal arc. The sign is `u_x * o_y - u_y * o_x` for the under
/// (horizontal) direction `u` and the over (vertical) direction `o`.
pub fn crossings(d: &LinkGrid) -> Vec<Crossing> {
    let n = d.n();
    let arcs = d.arcs();
    let (vertical, horizontal) = arcs.split_at(n);
    let mut out = Vec::new();
    for h in horizontal {
        for v in vertical {
            if v.spans(h.fixed_coord) && h.spans(v.fixed_coord) {
                out.push(Crossing {
                    row: h.fixed_coord,
                    col: v.fixed_coord,
                    sign: (h.direction() * v.direction()) as i32,
                });
            }
        }
    }
    out
}

/// Fenwick tree over `1..=n` holding signed values.
struct Fenwick(Vec<i64>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick(vec![0; n + 1])
    }

    fn add(&mut self, mut i: usize, delta: i64) {
        while i < self.0.len() {
            self.0[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, mut i: usize) -> i64 {
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i &= i - 1;
        }
        s
    }

    /// Sum over the open interval `(lo, hi)`.
    fn open_range(&self, lo: usize, hi: usize) -> i64 {
        if hi <= lo + 1 {
            0
        } else {
            self.prefix(hi - 1) - self.prefix(lo)
        }
    }
}

/// Crossing count and writhe in one bottom-to-top sweep.
///
/// A vertical arc is active on the rows strictly inside its span. Row `r`
/// is an endpoint of exactly the two columns holding its dots, so only
/// those change state there.
fn sweep(d: &LinkGrid) -> (usize, i64) {
    let n = d.n();
    let black_row = d.black_row();
    let white_row = d.white_row();
    let span = |c: usize| {
        let (b, w) = (black_row[c - 1], white_row[c - 1]);
        (b.min(w), b.max(w), if w > b { 1 } else { -1 })
    };

    let mut signed = Fenwick::new(n);
    let mut counts = Fenwick::new(n);
    let mut total = 0i64;
    let mut writhe = 0i64;
    for r in 1..=n {
        let (wc, bc) = (d.white_col[r - 1], d.black_col[r - 1]);
        for c in [wc, bc] {
            let (_, hi, dir) = span(c);
            if hi == r {
                signed.add(c, -dir);
                counts.add(c, -1);
            }
        }
        let (lo, hi) = (wc.min(bc), wc.max(bc));
        let h_dir = if bc > wc { 1 } else { -1 };
        writhe += h_dir * signed.open_range(lo, hi);
        total += counts.open_range(lo, hi);
        for c in [wc, bc] {
            let (lo, _, dir) = span(c);
            if lo == r {
                signed.add(c, dir);
                counts.add(c, 1);
            }
        }
    }
    (total as usize, writhe)
}

/// Signed crossing count, `O(n log n)`.
pub fn writhe(d: &LinkGrid) -> i64 {
    sweep(d).1
}

pub fn crossing_count(d: &LinkGrid) -> usize {
    sweep(d).0
}

/// Writhe summed directly from [`crossings`], `O(n^2)`.
pub fn writhe_pairwise(d: &LinkGrid) -> i64 {
    crossings(d).iter().map(|c| c.sign as i64).sum()
}

/// Total grid-unit length of the knot's arcs.
pub fn knot_length(k: &KnotLoop) -> usize {
    let cyclic = |v: &[usize]| -> usize {
        v.iter()
            .zip(v.iter().cycle().skip(1))
            .map(|(a, b)| a.abs_diff(*b))
            .sum()
    };
    cyclic(k.rho()) + cyclic(k.kappa())
}

/// Number of rows the knot occupies. The knot has twice as many arcs.
pub fn knot_size(k: &KnotLoop) -> usize {
    k.size()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::validate_link;
    use crate::sampler::{sample_closing_knot, sample_full_knot, sample_link, RandomStream};

    fn grid(b: &[usize], w: &[usize]) -> LinkGrid {
        validate_link(b.to_vec(), w.to_vec()).unwrap()
    }

    #[test]
    fn small_component_counts() {
        let d = grid(&[1, 2], &[2, 1]);
        assert_eq!(component_count(&d), 1);
        assert_eq!(component_count_geometric(&d), 1);
        let two = grid(&[1, 2, 3, 4], &[2, 1, 4, 3]);
        assert_eq!(component_count(&two), 2);
        assert_eq!(component_count_geometric(&two), 2);
    }

    #[test]
    fn smallest_diagram_has_no_crossings() {
        let d = grid(&[1, 2], &[2, 1]);
        assert!(crossings(&d).is_empty());
        assert_eq!(writhe(&d), 0);
    }

    #[test]
    fn upward_over_rightward_is_positive() {
        // Column 2 runs from row 1 up to row 3; row 2 runs from column 1
        // right to column 3.
        let d = grid(&[2, 3, 1], &[3, 1, 2]);
        let arcs = d.arcs();
        assert_eq!((arcs[1].from, arcs[1].to), (1, 3));
        assert_eq!((arcs[4].from, arcs[4].to), (1, 3));
        assert_eq!(
            crossings(&d),
            vec![Crossing {
                row: 2,
                col: 2,
                sign: 1
            }]
        );
        assert_eq!(writhe(&d), 1);
        assert_eq!(writhe(&d.mirror()), -1);
    }

    #[test]
    fn sweep_matches_pairwise_scan() {
        let mut rs = RandomStream::new(99, 0);
        for n in (2..60).chain([120, 257]) {
            for _ in 0..20 {
                let d = sample_link(n, &mut rs);
                let list = crossings(&d);
                assert_eq!(crossing_count(&d), list.len());
                assert_eq!(writhe(&d), writhe_pairwise(&d));
            }
        }
    }

    #[test]
    fn crossings_lie_inside_both_arcs() {
        let mut rs = RandomStream::new(4, 4);
        let d = sample_link(30, &mut rs);
        let arcs = d.arcs();
        for x in crossings(&d) {
            assert!(arcs[x.col - 1].spans(x.row));
            assert!(arcs[30 + x.row - 1].spans(x.col));
            assert!(x.sign == 1 || x.sign == -1);
        }
    }

    #[test]
    fn knot_length_and_size() {
        let k = KnotLoop::new(vec![1, 2], vec![1, 2]).unwrap();
        assert_eq!(knot_length(&k), 4);
        assert_eq!(knot_size(&k), 2);
        let mut rs = RandomStream::new(12, 0);
        for n in 2..80 {
            let k = sample_full_knot(n, &mut rs);
            let len = knot_length(&k);
            assert_eq!(len, k.to_link().total_arc_length());
            assert_eq!(len % 2, 0);
            assert!(len >= 2 * n);
            let c = sample_closing_knot(n, &mut rs);
            assert_eq!(knot_length(&c), c.to_link().total_arc_length());
            assert!(knot_size(&c) >= 2);
        }
    }
}
