//! Grid-diagram and knot encodings.
//!
//! Coordinates are 1-based. Rows run bottom to top and columns left to right,
//! so a vertical arc whose `to` exceeds its `from` points up. Arcs are straight
//! planar segments between dots; there is no wraparound.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GridError, Result};
use crate::perm::{check_permutation, inverse};

/// An `n x n` grid diagram stored as the column of the black and of the white
/// dot in each row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LinkGridRepr", into = "LinkGridRepr")]
pub struct LinkGrid {
    pub(crate) black_col: Vec<usize>,
    pub(crate) white_col: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LinkGridRepr {
    n: usize,
    black_col: Vec<usize>,
    white_col: Vec<usize>,
}

impl TryFrom<LinkGridRepr> for LinkGrid {
    type Error = GridError;

    fn try_from(raw: LinkGridRepr) -> Result<Self> {
        if raw.black_col.len() != raw.n {
            return Err(GridError::LengthMismatch(raw.n, raw.black_col.len()));
        }
        validate_link(raw.black_col, raw.white_col)
    }
}

impl From<LinkGrid> for LinkGridRepr {
    fn from(d: LinkGrid) -> Self {
        LinkGridRepr {
            n: d.n(),
            black_col: d.black_col,
            white_col: d.white_col,
        }
    }
}

/// Builds a [`LinkGrid`] from per-row black and white columns.
///
/// Collisions (a row whose two dots share a column) are reported as
/// [`GridError::Collision`]; the rejection sampler relies on this.
pub fn validate_link(black_col: Vec<usize>, white_col: Vec<usize>) -> Result<LinkGrid> {
    if black_col.len() != white_col.len() {
        return Err(GridError::LengthMismatch(black_col.len(), white_col.len()));
    }
    if black_col.len() < 2 {
        return Err(GridError::TooSmall(black_col.len(), 2));
    }
    check_permutation(&black_col)?;
    check_permutation(&white_col)?;
    if let Some(r) = black_col.iter().zip(&white_col).position(|(b, w)| b == w) {
        return Err(GridError::Collision { row: r + 1 });
    }
    Ok(LinkGrid {
        black_col,
        white_col,
    })
}

/// Places the white dot of each row in column `delta[black_col[r]]`.
pub fn from_derangement(black_col: &[usize], delta: &[usize]) -> Result<LinkGrid> {
    if black_col.len() != delta.len() {
        return Err(GridError::LengthMismatch(black_col.len(), delta.len()));
    }
    check_permutation(delta)?;
    if let Some(i) = delta.iter().enumerate().position(|(i, &v)| v == i + 1) {
        return Err(GridError::NotADerangement { point: i + 1 });
    }
    check_permutation(black_col)?;
    let white_col = black_col.iter().map(|&b| delta[b - 1]).collect();
    validate_link(black_col.to_vec(), white_col)
}

impl LinkGrid {
    pub fn n(&self) -> usize {
        self.black_col.len()
    }

    pub fn black_col(&self) -> &[usize] {
        &self.black_col
    }

    pub fn white_col(&self) -> &[usize] {
        &self.white_col
    }

    /// Row of the black dot in each column (indexed by column - 1).
    pub fn black_row(&self) -> Vec<usize> {
        inverse(&self.black_col)
    }

    /// Row of the white dot in each column (indexed by column - 1).
    pub fn white_row(&self) -> Vec<usize> {
        inverse(&self.white_col)
    }

    /// Left-right reflection, `c -> n + 1 - c`. Changes every crossing.
    pub fn mirror(&self) -> LinkGrid {
        let n = self.n();
        LinkGrid {
            black_col: self.black_col.iter().map(|&c| n + 1 - c).collect(),
            white_col: self.white_col.iter().map(|&c| n + 1 - c).collect(),
        }
    }

    /// The `n` vertical arcs (column order, black to white) followed by the
    /// `n` horizontal arcs (row order, white to black).
    pub fn arcs(&self) -> Vec<Arc> {
        let n = self.n();
        let black_row = self.black_row();
        let white_row = self.white_row();
        let mut out = Vec::with_capacity(2 * n);
        for c in 1..=n {
            out.push(Arc {
                orientation: Orientation::Vertical,
                fixed_coord: c,
                from: black_row[c - 1],
                to: white_row[c - 1],
            });
        }
        for r in 1..=n {
            out.push(Arc {
                orientation: Orientation::Horizontal,
                fixed_coord: r,
                from: self.white_col[r - 1],
                to: self.black_col[r - 1],
            });
        }
        out
    }

    /// Total grid-unit length of all arcs.
    pub fn total_arc_length(&self) -> usize {
        self.arcs().iter().map(Arc::length).sum()
    }

    /// Row permutation obtained by leaving row `r` along the vertical arc
    /// through its black dot and arriving at the row of that arc's white dot.
    /// Its cycles are the components of the link.
    pub fn transition_permutation(&self) -> Vec<usize> {
        let white_row = self.white_row();
        self.black_col.iter().map(|&c| white_row[c - 1]).collect()
    }
}

impl fmt::Display for LinkGrid {
    /// Compact `n;b1,..,bn;w1,..,wn` form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{};{};{}",
            self.n(),
            join(&self.black_col),
            join(&self.white_col)
        )
    }
}

impl FromStr for LinkGrid {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(';').collect();
        let [n, b, w] = parts.as_slice() else {
            return Err(GridError::Parse(format!(
                "expected `n;black;white`, got {s:?}"
            )));
        };
        let n: usize = n
            .trim()
            .parse()
            .map_err(|e| GridError::Parse(format!("bad grid size {n:?}: {e}")))?;
        let black = split_list(b)?;
        let white = split_list(w)?;
        if black.len() != n {
            return Err(GridError::LengthMismatch(n, black.len()));
        }
        validate_link(black, white)
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn split_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|e| GridError::Parse(format!("bad entry {t:?}: {e}")))
        })
        .collect()
}

/// A knot given by the order in which it visits rows and columns.
///
/// Step `i` puts a black dot at `(rho[i], kappa[i])` and a white dot at
/// `(rho[i+1], kappa[i])`, indices taken cyclically. The loop is stored in
/// canonical form with `rho[0] == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "KnotLoopRepr", into = "KnotLoopRepr")]
pub struct KnotLoop {
    rho: Vec<usize>,
    kappa: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct KnotLoopRepr {
    s: usize,
    rho: Vec<usize>,
    kappa: Vec<usize>,
}

impl TryFrom<KnotLoopRepr> for KnotLoop {
    type Error = GridError;

    fn try_from(raw: KnotLoopRepr) -> Result<Self> {
        if raw.rho.len() != raw.s {
            return Err(GridError::LengthMismatch(raw.s, raw.rho.len()));
        }
        KnotLoop::new(raw.rho, raw.kappa)
    }
}

impl From<KnotLoop> for KnotLoopRepr {
    fn from(k: KnotLoop) -> Self {
        KnotLoopRepr {
            s: k.size(),
            rho: k.rho,
            kappa: k.kappa,
        }
    }
}

impl KnotLoop {
    /// Validates both visit orders and rotates them so the loop starts in
    /// row 1. The `s` rotations of a loop all describe the same diagram.
    pub fn new(mut rho: Vec<usize>, mut kappa: Vec<usize>) -> Result<Self> {
        if rho.len() != kappa.len() {
            return Err(GridError::LengthMismatch(rho.len(), kappa.len()));
        }
        if rho.len() < 2 {
            return Err(GridError::TooSmall(rho.len(), 2));
        }
        check_permutation(&rho)?;
        check_permutation(&kappa)?;
        let start = rho.iter().position(|&r| r == 1).unwrap_or(0);
        rho.rotate_left(start);
        kappa.rotate_left(start);
        Ok(KnotLoop { rho, kappa })
    }

    pub(crate) fn from_canonical(rho: Vec<usize>, kappa: Vec<usize>) -> Self {
        debug_assert_eq!(rho.first(), Some(&1));
        KnotLoop { rho, kappa }
    }

    /// Number of rows (equally, columns) the knot occupies. It has `2s` arcs.
    pub fn size(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    /// Converts the visit orders into dot coordinates on an `s x s` grid.
    pub fn to_link(&self) -> LinkGrid {
        let s = self.size();
        let mut black_col = vec![0; s];
        let mut white_col = vec![0; s];
        for i in 0..s {
            black_col[self.rho[i] - 1] = self.kappa[i];
            white_col[self.rho[(i + 1) % s] - 1] = self.kappa[i];
        }
        LinkGrid {
            black_col,
            white_col,
        }
    }
}

pub fn knot_to_link(k: &KnotLoop) -> LinkGrid {
    k.to_link()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// A straight arc of the diagram. `fixed_coord` is the column of a vertical
/// arc or the row of a horizontal one; `from` and `to` run along the other
/// axis in the direction of travel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub orientation: Orientation,
    pub fixed_coord: usize,
    pub from: usize,
    pub to: usize,
}

impl Arc {
    pub fn length(&self) -> usize {
        self.from.abs_diff(self.to)
    }

    /// +1 when travelling toward larger coordinates, -1 otherwise.
    pub fn direction(&self) -> i64 {
        if self.to > self.from {
            1
        } else {
            -1
        }
    }

    /// True when `x` lies strictly between the endpoints.
    pub fn spans(&self, x: usize) -> bool {
        let (lo, hi) = (self.from.min(self.to), self.from.max(self.to));
        lo < x && x < hi
    }
}
